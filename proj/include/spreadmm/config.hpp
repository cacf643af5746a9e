#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spreadmm/approx_pricer.hpp"
#include "spreadmm/mc_engine.hpp"

namespace spreadmm {

enum class OutputFormat { Table, Csv };

struct RunConfig {
    ModelSpec model;
    SpreadContract contract;
    PricingOptions pricing;
    McOptions mc;
    OutputFormat format = OutputFormat::Table;
    // Known proxy parameters for a `solve` round trip; the mode follows the variant.
    std::optional<ProxyParams> proxy;
    std::string tables_path;
};

// Parses `section.key = value` lines; '#' starts a comment. Unknown keys and
// invalid values raise ConfigError naming the field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

MixingLaw make_law(const std::string& family, const std::vector<double>& params,
                   const std::string& parameterization = "mean_shape");

MgfPolicy parse_mgf_policy(const std::string& s);
OutputFormat parse_output_format(const std::string& s);

} // namespace spreadmm
