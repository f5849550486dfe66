#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace embc {

enum class ErrorKind {
    parameter,
    lookup,
    decode,
    infeasible_budget,
    undefined_statistic,
    protocol,
    spec,
    registration,
    schema,
    io,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library is an embc::Error carrying a kind,
// so the CLI can map it to an exit code and a machine-readable line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InfeasibleBudget : public Error {
public:
    InfeasibleBudget(double target_bpp, double min_achievable_bpp);

    double target_bpp() const noexcept { return target_bpp_; }
    double min_achievable_bpp() const noexcept { return min_achievable_bpp_; }

private:
    double target_bpp_;
    double min_achievable_bpp_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace embc
