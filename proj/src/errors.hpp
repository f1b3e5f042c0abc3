#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vinodec {

/// Thrown when an operation would exceed its memory or work budget.
/// Budget overruns are expected outcomes in sweeps: callers catch this
/// per cell and keep going.
class ResourceError : public std::runtime_error {
public:
    ResourceError(std::string what, std::uint64_t attempted, std::uint64_t budget)
        : std::runtime_error(std::move(what)), attempted_(attempted), budget_(budget) {}

    std::uint64_t attempted() const noexcept { return attempted_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t attempted_;
    std::uint64_t budget_;
};

} // namespace vinodec
