#include "shadowblade/exec.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "shadowblade/error.hpp"

extern char** environ;

namespace shadowblade {

namespace fs = std::filesystem;
using nlohmann::json;

std::string canonical_key(const Invocation& invocation) {
    std::string material = invocation.program;
    for (std::size_t i = 0; i < invocation.argv.size(); ++i) {
        material += '\0';
        const std::string& arg = invocation.argv[i];
        const std::string* previous = i > 0 ? &invocation.argv[i - 1] : nullptr;
        if (previous && *previous == "-o" && invocation.output_path && arg == *invocation.output_path) {
            material += "<output>";
        } else if (previous && *previous == "-w") {
            material += fs::path(arg).filename().string();
        } else {
            material += arg;
        }
    }
    return sha256_hex(material);
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::ExecutionFailed, "cannot write " + path.string());
}

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (pipe2(fds, O_CLOEXEC) != 0) {
            throw Error(ErrorCode::ExecutionFailed, std::string("pipe: ") + std::strerror(errno));
        }
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    Pipe(const Pipe&) = delete;
    Pipe& operator=(const Pipe&) = delete;
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
};

struct SpawnActions {
    posix_spawn_file_actions_t actions;
    SpawnActions() { posix_spawn_file_actions_init(&actions); }
    ~SpawnActions() { posix_spawn_file_actions_destroy(&actions); }
};

} // namespace

LiveBackend::LiveBackend(std::optional<fs::path> record_dir) : record_dir_(std::move(record_dir)) {}

RawOutput LiveBackend::run(const Invocation& invocation) {
    using clock = std::chrono::steady_clock;
    if (invocation.program.empty()) throw Error(ErrorCode::ProgramNotFound, "empty program name");
    if (invocation.output_path) {
        std::error_code ec;
        fs::remove(*invocation.output_path, ec);
    }

    Pipe out_pipe;
    Pipe err_pipe;
    SpawnActions fa;
    posix_spawn_file_actions_addopen(&fa.actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_adddup2(&fa.actions, out_pipe.fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&fa.actions, err_pipe.fds[1], STDERR_FILENO);

    std::vector<char*> args;
    args.push_back(const_cast<char*>(invocation.program.c_str()));
    for (const auto& arg : invocation.argv) args.push_back(const_cast<char*>(arg.c_str()));
    args.push_back(nullptr);

    const auto started = clock::now();
    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, invocation.program.c_str(), &fa.actions, nullptr, args.data(), environ);
    if (rc == ENOENT || rc == EACCES) {
        throw Error(ErrorCode::ProgramNotFound, "program not found: '" + invocation.program + "'");
    }
    if (rc != 0) {
        throw Error(ErrorCode::ExecutionFailed, "spawn " + invocation.program + ": " + std::strerror(rc));
    }
    out_pipe.close_write();
    err_pipe.close_write();

    RawOutput result;
    const auto deadline = started + invocation.timeout;
    std::array<pollfd, 2> fds{pollfd{out_pipe.fds[0], POLLIN, 0}, pollfd{err_pipe.fds[0], POLLIN, 0}};
    std::array<std::string*, 2> sinks{&result.standard_output, &result.standard_error};
    bool timed_out = false;
    char buffer[8192];
    while (fds[0].fd >= 0 || fds[1].fd >= 0) {
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
        if (remaining.count() <= 0) {
            timed_out = true;
            break;
        }
        const int ready = ::poll(fds.data(), fds.size(), static_cast<int>(remaining.count()));
        if (ready < 0 && errno == EINTR) continue;
        if (ready < 0) break;
        for (std::size_t i = 0; i < fds.size(); ++i) {
            if (fds[i].fd < 0 || fds[i].revents == 0) continue;
            const ssize_t n = ::read(fds[i].fd, buffer, sizeof buffer);
            if (n > 0) {
                sinks[i]->append(buffer, static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                fds[i].fd = -1;
            }
        }
    }

    if (timed_out) {
        ::kill(pid, SIGKILL);
        int status = 0;
        ::waitpid(pid, &status, 0);
        throw Error(ErrorCode::Timeout, invocation.program + " exceeded its " +
                                            std::to_string(invocation.timeout.count()) + " s timeout");
    }

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.duration = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - started);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);

    if (invocation.output_path && fs::exists(*invocation.output_path)) {
        result.output_file = read_file(*invocation.output_path);
    }
    if (record_dir_ && result.exit_code == 0) record_fixture(*record_dir_, invocation, result);
    return result;
}

ReplayBackend::ReplayBackend(fs::path fixtures_dir) : dir_(std::move(fixtures_dir)) {}

RawOutput ReplayBackend::run(const Invocation& invocation) {
    const std::string key = canonical_key(invocation);
    const fs::path out_path = dir_ / (key + ".out");
    if (!fs::is_regular_file(out_path)) {
        throw Error(ErrorCode::FixtureMissing, "no replay fixture " + key + " for " + invocation.program);
    }
    RawOutput result;
    std::string bytes = read_file(out_path);
    if (invocation.output_path) {
        result.output_file = std::move(bytes);
    } else {
        result.standard_output = std::move(bytes);
    }

    const fs::path meta_path = dir_ / (key + ".meta");
    if (fs::is_regular_file(meta_path)) {
        json meta = json::parse(read_file(meta_path), nullptr, false);
        if (meta.is_object()) {
            result.exit_code = meta.value("exit_code", 0);
            result.duration = std::chrono::milliseconds(meta.value("duration_ms", 0LL));
        }
    }
    return result;
}

LimitedBackend::LimitedBackend(std::shared_ptr<ExecutionBackend> inner, int max_concurrent)
    : inner_(std::move(inner)), slots_(std::max(1, max_concurrent)) {}

RawOutput LimitedBackend::run(const Invocation& invocation) {
    slots_.acquire();
    struct Release {
        std::counting_semaphore<>& slots;
        ~Release() { slots.release(); }
    } release{slots_};
    return inner_->run(invocation);
}

void record_fixture(const fs::path& dir, const Invocation& invocation, const RawOutput& output) {
    fs::create_directories(dir);
    const std::string key = canonical_key(invocation);
    write_file(dir / (key + ".out"), output.document());
    const json meta{{"exit_code", output.exit_code}, {"duration_ms", output.duration.count()}};
    write_file(dir / (key + ".meta"), meta.dump(2) + "\n");
}

} // namespace shadowblade
