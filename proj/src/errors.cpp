#include "spreadmm/errors.hpp"

#include <sstream>

namespace spreadmm {

namespace {

std::string describe_offending(const std::vector<MgfArgument>& offending, double bound) {
    std::ostringstream os;
    os.precision(10);
    os << "mgf argument outside the domain (D = " << bound << "):";
    for (const auto& a : offending) os << " " << a.label << " = " << a.value << ";";
    return os.str();
}

} // namespace

MgfDomainError::MgfDomainError(std::vector<MgfArgument> offending, double bound)
    : Error(describe_offending(offending, bound)), offending_(std::move(offending)), bound_(bound) {}

} // namespace spreadmm
