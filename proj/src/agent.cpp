#include "estgraph/agent.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "estgraph/errors.hpp"
#include "estgraph/rng.hpp"

namespace estgraph {

ExecAdapter::ExecAdapter(std::string command, double timeout_seconds)
    : command_(std::move(command)), timeout_seconds_(timeout_seconds) {
  if (command_.empty()) throw SpecError("exec adapter needs a command");
  if (timeout_seconds_ <= 0) throw SpecError("timeout must be positive");
}

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (pipe(fd) != 0) throw ProcessError("pipe failed");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fd[0] >= 0) close(fd[0]);
    fd[0] = -1;
  }
  void close_write() {
    if (fd[1] >= 0) close(fd[1]);
    fd[1] = -1;
  }
};

void set_nonblocking(int fd) { fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK); }

}  // namespace

std::string ExecAdapter::query(const std::string& prompt_text) {
  signal(SIGPIPE, SIG_IGN);  // a dying child must not take us down mid-write

  Pipe to_child, from_child;
  pid_t pid = fork();
  if (pid < 0) throw ProcessError("fork failed");
  if (pid == 0) {
    dup2(to_child.fd[0], STDIN_FILENO);
    dup2(from_child.fd[1], STDOUT_FILENO);
    close(to_child.fd[0]);
    close(to_child.fd[1]);
    close(from_child.fd[0]);
    close(from_child.fd[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), (char*)nullptr);
    _exit(127);
  }
  to_child.close_read();
  from_child.close_write();
  set_nonblocking(to_child.fd[1]);
  set_nonblocking(from_child.fd[0]);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_seconds_);
  std::string out;
  size_t written = 0;
  bool input_open = true;
  char buf[65536];

  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw TimeoutError("agent exceeded " + std::to_string(timeout_seconds_) + " s");
    }

    struct pollfd fds[2];
    nfds_t nfds = 0;
    int read_slot = -1, write_slot = -1;
    if (from_child.fd[0] >= 0) {
      read_slot = (int)nfds;
      fds[nfds++] = {from_child.fd[0], POLLIN, 0};
    }
    if (input_open) {
      write_slot = (int)nfds;
      fds[nfds++] = {to_child.fd[1], POLLOUT, 0};
    }
    if (nfds == 0) break;

    int rc = poll(fds, nfds, (int)std::min<long long>(left, 1000));
    if (rc < 0 && errno != EINTR) throw ProcessError("poll failed");
    if (rc <= 0) continue;

    if (write_slot >= 0 && (fds[write_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (written < prompt_text.size()) {
        ssize_t k = write(to_child.fd[1], prompt_text.data() + written,
                          prompt_text.size() - written);
        if (k > 0) written += (size_t)k;
        else if (k < 0 && errno != EAGAIN && errno != EINTR) input_open = false;
      }
      if (written >= prompt_text.size()) input_open = false;
      if (!input_open) to_child.close_write();
    }
    if (read_slot >= 0 && (fds[read_slot].revents & (POLLIN | POLLERR | POLLHUP))) {
      ssize_t k = read(from_child.fd[0], buf, sizeof buf);
      if (k > 0) {
        out.append(buf, (size_t)k);
      } else if (k == 0) {
        from_child.close_read();
        if (input_open) {
          input_open = false;
          to_child.close_write();
        }
        break;
      } else if (errno != EAGAIN && errno != EINTR) {
        throw ProcessError("read from agent failed");
      }
    }
  }

  int wstatus = 0;
  waitpid(pid, &wstatus, 0);
  if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) != 0)
    throw ProcessError("agent exited with code " + std::to_string(WEXITSTATUS(wstatus)));
  if (WIFSIGNALED(wstatus))
    throw ProcessError("agent killed by signal " + std::to_string(WTERMSIG(wstatus)));
  return out;
}

ReplayAdapter::ReplayAdapter(std::string dir) : dir_(std::move(dir)) {
  if (dir_.empty()) throw SpecError("replay adapter needs a directory");
}

std::string ReplayAdapter::key(const std::string& prompt_text) {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(prompt_text));
  return buf;
}

std::string ReplayAdapter::query(const std::string& prompt_text) {
  std::string path = dir_ + "/" + key(prompt_text) + ".txt";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProcessError("no stored response: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ReplayAdapter::store(const std::string& prompt_text, const std::string& response) const {
  std::filesystem::create_directories(dir_);
  std::string path = dir_ + "/" + key(prompt_text) + ".txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << response;
}

ParsedAnswer agent_query(AgentAdapter& adapter, const PromptArtifact& prompt) {
  return parse_answer(prompt.task, adapter.query(prompt.text));
}

}  // namespace estgraph
