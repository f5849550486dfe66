#include "embc/error.hpp"

#include <sstream>

namespace embc {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::decode: return "decode";
    case ErrorKind::infeasible_budget: return "infeasible_budget";
    case ErrorKind::undefined_statistic: return "undefined_statistic";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::spec: return "spec";
    case ErrorKind::registration: return "registration";
    case ErrorKind::schema: return "schema";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

namespace {
std::string infeasible_message(double target, double floor) {
    std::ostringstream os;
    os << "budget " << target << " bpp is below the codec floor of " << floor << " bpp";
    return os.str();
}
} // namespace

InfeasibleBudget::InfeasibleBudget(double target_bpp, double min_achievable_bpp)
    : Error(ErrorKind::infeasible_budget, infeasible_message(target_bpp, min_achievable_bpp)),
      target_bpp_(target_bpp), min_achievable_bpp_(min_achievable_bpp) {}

} // namespace embc
