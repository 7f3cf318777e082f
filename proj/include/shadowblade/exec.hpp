#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "shadowblade/tools.hpp"

namespace shadowblade {

struct RawOutput {
    std::string standard_output;
    std::string standard_error;
    int exit_code = 0;
    std::chrono::milliseconds duration{0};
    // Contents of Invocation::output_path after the run, when it has one.
    std::optional<std::string> output_file;

    /// The tool's result document: the output file when there is one,
    /// stdout otherwise.
    const std::string& document() const noexcept {
        return output_file ? *output_file : standard_output;
    }
};

class ExecutionBackend {
public:
    virtual ~ExecutionBackend() = default;
    virtual RawOutput run(const Invocation& invocation) = 0;
};

/// Spawns the program directly (posix_spawnp, no shell) and kills it when the
/// invocation's timeout expires. When a record directory is given, every
/// successful run is also written there as a replay fixture.
class LiveBackend final : public ExecutionBackend {
public:
    explicit LiveBackend(std::optional<std::filesystem::path> record_dir = std::nullopt);
    RawOutput run(const Invocation& invocation) override;

private:
    std::optional<std::filesystem::path> record_dir_;
};

/// Serves recorded outputs from <fixtures>/<key>.out and <key>.meta, where
/// key = canonical_key(invocation).
class ReplayBackend final : public ExecutionBackend {
public:
    explicit ReplayBackend(std::filesystem::path fixtures_dir);
    RawOutput run(const Invocation& invocation) override;

    const std::filesystem::path& fixtures_dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

/// Caps the number of concurrent runs through the wrapped backend.
class LimitedBackend final : public ExecutionBackend {
public:
    LimitedBackend(std::shared_ptr<ExecutionBackend> inner, int max_concurrent);
    RawOutput run(const Invocation& invocation) override;

private:
    std::shared_ptr<ExecutionBackend> inner_;
    std::counting_semaphore<> slots_;
};

/// Replay fixture key: lowercase hex SHA-256 of program + "\0" + argv joined
/// with "\0". The value after "-o" is replaced by "<output>" and the value
/// after "-w" by its file name, so temp-file and wordlist locations do not
/// leak into the key.
std::string canonical_key(const Invocation& invocation);

/// Writes <key>.out (the result document) and <key>.meta into `dir`.
void record_fixture(const std::filesystem::path& dir, const Invocation& invocation,
                    const RawOutput& output);

inline RawOutput execute(const Invocation& invocation, ExecutionBackend& backend) {
    return backend.run(invocation);
}

} // namespace shadowblade
