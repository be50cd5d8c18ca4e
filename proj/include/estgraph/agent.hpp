#pragma once

#include <cstdint>
#include <string>

#include "estgraph/promptgen.hpp"

namespace estgraph {

// Anything that can turn a prompt into a response text. Stands in for an
// LLM API: the harness renders a prompt, the adapter produces the reply,
// parse_answer extracts the estimate.
class AgentAdapter {
 public:
  virtual ~AgentAdapter() = default;
  virtual std::string query(const std::string& prompt_text) = 0;
  virtual std::string name() const = 0;
};

// Runs an external command per query. The prompt goes to the child's
// standard input, the response is read from its standard output. The
// command is run through /bin/sh -c, so pipelines work.
class ExecAdapter : public AgentAdapter {
 public:
  explicit ExecAdapter(std::string command, double timeout_seconds = 300.0);
  std::string query(const std::string& prompt_text) override;
  std::string name() const override { return "exec"; }

 private:
  std::string command_;
  double timeout_seconds_;
};

// Serves stored responses from a directory keyed by prompt-text hash:
// <dir>/<16 hex digits of fnv1a64(prompt)>.txt. A query with no stored
// file throws ProcessError. `store` writes a response under the same key,
// which is how replay directories are produced in the first place.
class ReplayAdapter : public AgentAdapter {
 public:
  explicit ReplayAdapter(std::string dir);
  std::string query(const std::string& prompt_text) override;
  std::string name() const override { return "replay"; }

  void store(const std::string& prompt_text, const std::string& response) const;
  static std::string key(const std::string& prompt_text);

 private:
  std::string dir_;
};

// render-independent convenience: query + parse in one step
ParsedAnswer agent_query(AgentAdapter& adapter, const PromptArtifact& prompt);

}  // namespace estgraph
