#pragma once

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "mmt/error.hpp"
#include "mmt/strings.hpp"

namespace mmt {

enum class TranslatorKind { ExternalCommand, HypothesisFile, BuiltinEcho, BuiltinDictionary };

inline TranslatorKind translator_kind_from_string(std::string_view name) {
    if (name == "external-command") return TranslatorKind::ExternalCommand;
    if (name == "hypothesis-file") return TranslatorKind::HypothesisFile;
    if (name == "builtin-echo") return TranslatorKind::BuiltinEcho;
    if (name == "builtin-dictionary") return TranslatorKind::BuiltinDictionary;
    throw Error("unknown translator kind: " + std::string(name));
}

inline std::string to_string(TranslatorKind kind) {
    switch (kind) {
        case TranslatorKind::ExternalCommand: return "external-command";
        case TranslatorKind::HypothesisFile: return "hypothesis-file";
        case TranslatorKind::BuiltinEcho: return "builtin-echo";
        case TranslatorKind::BuiltinDictionary: return "builtin-dictionary";
    }
    return "builtin-echo";
}

struct TranslatorSpec {
    TranslatorKind kind = TranslatorKind::BuiltinEcho;
    std::string command;  // external-command: run via `sh -c`
    std::string path;     // hypothesis-file / builtin-dictionary word table
    int batch_size = 32;
    double timeout_seconds = 600.0;  // per batch
    std::map<std::string, std::string> word_table;  // builtin-dictionary
};

// Word table: `source<TAB>target` per line, blank lines skipped.
inline std::map<std::string, std::string> load_word_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open word table: " + path);
    std::map<std::string, std::string> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (str::trim(line).empty()) continue;
        auto fields = str::split(line, '\t');
        if (fields.size() != 2)
            throw ParseError("word table line must be `source<TAB>target`", lineno);
        table[fields[0]] = fields[1];
    }
    return table;
}

namespace detail {

inline void ignore_sigpipe_once() {
    // Writes to a dead child must fail with EPIPE instead of killing us.
    static const bool installed = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)installed;
}

struct Pipe {
    int read_fd = -1;
    int write_fd = -1;

    Pipe() {
        int fds[2];
        if (::pipe(fds) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
        read_fd = fds[0];
        write_fd = fds[1];
    }
};

inline void close_fd(int& fd) {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

inline void set_nonblocking(int fd) {
    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

// A shell child with piped stdin/stdout/stderr.
class ChildProcess {
public:
    explicit ChildProcess(const std::string& command) {
        ignore_sigpipe_once();
        Pipe to_child, from_child, errs;
        pid_ = ::fork();
        if (pid_ < 0) {
            int saved = errno;
            for (int fd : {to_child.read_fd, to_child.write_fd, from_child.read_fd,
                           from_child.write_fd, errs.read_fd, errs.write_fd})
                ::close(fd);
            throw Error(std::string("fork: ") + std::strerror(saved));
        }
        if (pid_ == 0) {
            ::dup2(to_child.read_fd, STDIN_FILENO);
            ::dup2(from_child.write_fd, STDOUT_FILENO);
            ::dup2(errs.write_fd, STDERR_FILENO);
            ::close(to_child.read_fd);
            ::close(to_child.write_fd);
            ::close(from_child.read_fd);
            ::close(from_child.write_fd);
            ::close(errs.read_fd);
            ::close(errs.write_fd);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::close(to_child.read_fd);
        ::close(from_child.write_fd);
        ::close(errs.write_fd);
        stdin_fd_ = to_child.write_fd;
        stdout_fd_ = from_child.read_fd;
        stderr_fd_ = errs.read_fd;
        set_nonblocking(stdin_fd_);
        set_nonblocking(stdout_fd_);
        set_nonblocking(stderr_fd_);
    }

    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    ~ChildProcess() {
        close_fd(stdin_fd_);
        close_fd(stdout_fd_);
        close_fd(stderr_fd_);
        if (pid_ > 0 && !reaped_) {
            ::kill(pid_, SIGKILL);
            int status = 0;
            ::waitpid(pid_, &status, 0);
        }
    }

    int stdin_fd() const { return stdin_fd_; }
    int stdout_fd() const { return stdout_fd_; }
    int stderr_fd() const { return stderr_fd_; }

    void close_stdin() { close_fd(stdin_fd_); }

    void kill_now() {
        if (pid_ > 0 && !reaped_) ::kill(pid_, SIGKILL);
    }

    // Blocks; returns the raw wait status.
    int wait() {
        if (reaped_) return status_;
        while (::waitpid(pid_, &status_, 0) < 0 && errno == EINTR) {}
        reaped_ = true;
        return status_;
    }

private:
    pid_t pid_ = -1;
    int stdin_fd_ = -1, stdout_fd_ = -1, stderr_fd_ = -1;
    bool reaped_ = false;
    int status_ = 0;
};

inline std::string diag_tail(const std::string& diagnostics) {
    constexpr std::size_t kTail = 2048;
    std::string_view view = diagnostics;
    if (view.size() > kTail) view = view.substr(view.size() - kTail);
    std::string trimmed(str::trim(view));
    return trimmed.empty() ? std::string("(no diagnostics)") : trimmed;
}

// Runs the line protocol against a shell command: writes sources one per
// line in batches, expects exactly one output line per input line, in order.
inline std::vector<std::string> run_external(const TranslatorSpec& spec,
                                             const std::vector<std::string>& sources) {
    using Clock = std::chrono::steady_clock;
    ChildProcess child(spec.command);
    const std::size_t batch = static_cast<std::size_t>(spec.batch_size);

    std::vector<std::string> lines;
    std::string out_buffer, diagnostics;
    bool stdout_eof = false;

    auto pump = [&](std::string_view pending, std::size_t lines_needed,
                    bool close_after_write) -> std::string_view {
        auto deadline =
            Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(spec.timeout_seconds));
        while (lines.size() < lines_needed || !pending.empty()) {
            if (stdout_eof && lines.size() < lines_needed && pending.empty()) break;
            auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - Clock::now());
            if (remaining.count() <= 0) {
                child.kill_now();
                child.wait();
                throw ProtocolError("translator timed out after " +
                                    std::to_string(spec.timeout_seconds) +
                                    " s on a batch; stderr: " + diag_tail(diagnostics));
            }
            struct pollfd fds[3];
            nfds_t nfds = 0;
            int stdin_slot = -1, stdout_slot = -1, stderr_slot = -1;
            if (!pending.empty() && child.stdin_fd() >= 0) {
                stdin_slot = static_cast<int>(nfds);
                fds[nfds++] = {child.stdin_fd(), POLLOUT, 0};
            }
            if (!stdout_eof) {
                stdout_slot = static_cast<int>(nfds);
                fds[nfds++] = {child.stdout_fd(), POLLIN, 0};
            }
            if (child.stderr_fd() >= 0) {
                stderr_slot = static_cast<int>(nfds);
                fds[nfds++] = {child.stderr_fd(), POLLIN, 0};
            }
            if (nfds == 0) break;
            int rc = ::poll(fds, nfds, static_cast<int>(std::min<long long>(
                                           remaining.count(), 60'000)));
            if (rc < 0) {
                if (errno == EINTR) continue;
                throw Error(std::string("poll: ") + std::strerror(errno));
            }
            if (stdin_slot >= 0 && (fds[stdin_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
                ssize_t n = ::write(child.stdin_fd(), pending.data(), pending.size());
                if (n > 0) {
                    pending.remove_prefix(static_cast<std::size_t>(n));
                    if (pending.empty() && close_after_write) child.close_stdin();
                } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
                    // EPIPE etc.: child is gone; let the reader drain and the
                    // exit status produce the real error.
                    child.close_stdin();
                    pending = {};
                }
            }
            char buf[4096];
            if (stdout_slot >= 0 && (fds[stdout_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
                ssize_t n = ::read(child.stdout_fd(), buf, sizeof buf);
                if (n > 0) {
                    out_buffer.append(buf, static_cast<std::size_t>(n));
                    std::size_t nl;
                    while ((nl = out_buffer.find('\n')) != std::string::npos) {
                        std::string line = out_buffer.substr(0, nl);
                        if (!line.empty() && line.back() == '\r') line.pop_back();
                        lines.push_back(std::move(line));
                        out_buffer.erase(0, nl + 1);
                    }
                } else if (n == 0) {
                    stdout_eof = true;
                } else if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
                    stdout_eof = true;
                }
            }
            if (stderr_slot >= 0 && (fds[stderr_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
                ssize_t n = ::read(child.stderr_fd(), buf, sizeof buf);
                if (n > 0 && diagnostics.size() < 65536)
                    diagnostics.append(buf, static_cast<std::size_t>(n));
            }
        }
        return pending;
    };

    for (std::size_t begin = 0; begin < sources.size(); begin += batch) {
        std::size_t end = std::min(begin + batch, sources.size());
        std::string payload;
        for (std::size_t i = begin; i < end; ++i) {
            payload += sources[i];
            payload += '\n';
        }
        bool last_batch = end == sources.size();
        auto leftover = pump(payload, end, last_batch);
        if (!leftover.empty()) {
            child.wait();
            throw ProtocolError("translator stopped accepting input mid-batch; stderr: " +
                                diag_tail(diagnostics));
        }
        if (lines.size() < end) break;  // EOF early: fall through to the checks below
    }

    // All input is delivered; make sure the child sees EOF, then drain.
    child.close_stdin();
    pump({}, sources.size(), true);
    while (!stdout_eof) {
        auto before = lines.size();
        pump({}, lines.size() + 1, true);
        if (lines.size() == before) break;
    }
    if (!out_buffer.empty()) {
        if (out_buffer.back() == '\r') out_buffer.pop_back();
        lines.push_back(std::move(out_buffer));
        out_buffer.clear();
    }

    int status = child.wait();
    if (WIFEXITED(status) && WEXITSTATUS(status) != 0)
        throw ProtocolError("translator exited with status " +
                            std::to_string(WEXITSTATUS(status)) +
                            "; stderr: " + diag_tail(diagnostics));
    if (WIFSIGNALED(status))
        throw ProtocolError("translator killed by signal " + std::to_string(WTERMSIG(status)) +
                            "; stderr: " + diag_tail(diagnostics));
    if (lines.size() != sources.size())
        throw ProtocolError("translator protocol violation: " + std::to_string(sources.size()) +
                            " input lines but " + std::to_string(lines.size()) +
                            " output lines; stderr: " + diag_tail(diagnostics));
    return lines;
}

}  // namespace detail

// Reads one hypothesis per line; the count must match the source count.
inline std::vector<std::string> load_hypothesis_file(const std::string& path,
                                                     std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open hypothesis file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.size() != expected)
        throw ProtocolError("hypothesis file " + path + " has " + std::to_string(lines.size()) +
                            " lines for " + std::to_string(expected) + " sources");
    return lines;
}

// Maps whitespace tokens through the word table; unknown tokens pass
// through unchanged.
inline std::string dictionary_translate(const std::map<std::string, std::string>& table,
                                        std::string_view source) {
    std::vector<std::string> out;
    for (auto& tok : str::split_ws(source)) {
        auto it = table.find(tok);
        out.push_back(it == table.end() ? tok : it->second);
    }
    return str::join(out, " ");
}

// Drives one translator over a batch of source lines. Output is strictly
// 1:1 with the input and order-preserving for every kind.
inline std::vector<std::string> translate(const TranslatorSpec& spec,
                                          const std::vector<std::string>& sources) {
    if (sources.empty()) throw Error("translate: no sources");
    if (spec.batch_size < 1) throw Error("translate: batch_size must be >= 1");
    switch (spec.kind) {
        case TranslatorKind::BuiltinEcho:
            return sources;
        case TranslatorKind::BuiltinDictionary: {
            std::map<std::string, std::string> loaded;
            const auto* table = &spec.word_table;
            if (table->empty() && !spec.path.empty()) {
                loaded = load_word_table(spec.path);
                table = &loaded;
            }
            std::vector<std::string> out;
            out.reserve(sources.size());
            for (const auto& src : sources) out.push_back(dictionary_translate(*table, src));
            return out;
        }
        case TranslatorKind::HypothesisFile:
            return load_hypothesis_file(spec.path, sources.size());
        case TranslatorKind::ExternalCommand:
            if (str::trim(spec.command).empty())
                throw Error("translate: external-command needs a non-empty command");
            return detail::run_external(spec, sources);
    }
    throw Error("translate: unhandled translator kind");
}

}  // namespace mmt
