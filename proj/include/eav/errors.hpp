#pragma once

#include <stdexcept>
#include <string>

namespace eav {

/// A precondition on an argument was violated (bad delta, bad k, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The data or configuration admit no candidate k for estimation
/// (k0 unreachable, empty effective grid, too few positive points).
class NoAdmissibleCandidate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Monte-Carlo replication failed; carries the replication index.
class ReplicationError : public std::runtime_error {
public:
    ReplicationError(std::size_t index, const std::string& what)
        : std::runtime_error("replication " + std::to_string(index) + ": " + what),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace eav
