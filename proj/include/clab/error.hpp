#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace clab {

// Bad arguments, violated preconditions, malformed files.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Picard iteration left the contraction regime. Carries the X-norms of the
// successive differences seen so far.
class PicardDivergence : public std::runtime_error {
public:
    PicardDivergence(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

} // namespace clab
