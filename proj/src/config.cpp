#include "spreadmm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spreadmm/errors.hpp"

namespace spreadmm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a nonnegative integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError(key, "expected a comma separated list of numbers");
    return out;
}

double positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
    return v;
}

} // namespace

MixingLaw make_law(const std::string& family, const std::vector<double>& params, const std::string& parameterization) {
    auto need = [&](std::size_t n) {
        if (params.size() != n) {
            throw ConfigError("law.params", family + " takes " + std::to_string(n) + " parameter(s)");
        }
        for (double p : params) positive("law.params", p);
    };
    if (family == "exponential") {
        need(1);
        return MixingLaw::exponential(params[0]);
    }
    if (family == "gamma") {
        need(2);
        return MixingLaw::gamma(params[0], params[1]);
    }
    if (family == "inverse_gaussian") {
        need(2);
        IgParameterization p;
        if (parameterization == "mean_shape") p = IgParameterization::MeanShape;
        else if (parameterization == "delta_gamma") p = IgParameterization::DeltaGamma;
        else throw ConfigError("law.parameterization", "expected mean_shape or delta_gamma");
        return MixingLaw::inverse_gaussian(params[0], params[1], p);
    }
    if (family == "chi_squared") {
        need(1);
        return MixingLaw::chi_squared(params[0]);
    }
    if (family == "degenerate") {
        need(1);
        return MixingLaw::degenerate(params[0]);
    }
    throw ConfigError("law.family", "unknown family '" + family + "'");
}

MgfPolicy parse_mgf_policy(const std::string& s) {
    if (s == "exact") return MgfPolicy::Exact;
    if (s == "truncated") return MgfPolicy::Truncated;
    if (s == "auto") return MgfPolicy::Auto;
    throw ConfigError("engine.mgf", "expected exact, truncated or auto");
}

OutputFormat parse_output_format(const std::string& s) {
    if (s == "table") return OutputFormat::Table;
    if (s == "csv") return OutputFormat::Csv;
    throw ConfigError("output.format", "expected table or csv");
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (kv.count(key)) throw ConfigError(key, "given more than once");
        kv[key] = trim(line.substr(eq + 1));
    }

    RunConfig cfg;
    std::string family = "exponential", parameterization = "mean_shape";
    std::vector<double> law_params{1.0};
    std::optional<double> mu1, mu2;
    std::string proxy_mode;
    std::map<std::string, double> proxy_values;

    for (const auto& [key, v] : kv) {
        auto num = [&]() { return to_double(key, v); };
        if (key == "model.s1") cfg.model.s1_0 = positive(key, num());
        else if (key == "model.s2") cfg.model.s2_0 = positive(key, num());
        else if (key == "model.r") cfg.model.r = num();
        else if (key == "model.delta1") cfg.model.delta1 = num();
        else if (key == "model.delta2") cfg.model.delta2 = num();
        else if (key == "model.beta1") cfg.model.beta1 = num();
        else if (key == "model.beta2") cfg.model.beta2 = num();
        else if (key == "model.a11") cfg.model.a.a11 = num();
        else if (key == "model.a12") cfg.model.a.a12 = num();
        else if (key == "model.a21") cfg.model.a.a21 = num();
        else if (key == "model.a22") cfg.model.a.a22 = num();
        else if (key == "model.elliptical") cfg.model.elliptical = to_bool(key, v);
        else if (key == "model.mu1") mu1 = num();
        else if (key == "model.mu2") mu2 = num();
        else if (key == "law.family") family = v;
        else if (key == "law.params") law_params = to_list(key, v);
        else if (key == "law.parameterization") parameterization = v;
        else if (key == "contract.strike") {
            cfg.contract.strike = num();
            if (cfg.contract.strike < 0.0) throw ConfigError(key, "must be nonnegative");
        }
        else if (key == "contract.maturity") cfg.contract.maturity = positive(key, num());
        else if (key == "engine.mgf") cfg.pricing.mgf = parse_mgf_policy(v);
        else if (key == "engine.tol") cfg.pricing.quad_tol = positive(key, num());
        else if (key == "engine.solver_tol") cfg.pricing.match.tolerance = positive(key, num());
        else if (key == "engine.n") {
            cfg.mc.n = to_uint(key, v);
            if (cfg.mc.n == 0) throw ConfigError(key, "must be at least 1");
        }
        else if (key == "engine.seed") cfg.mc.seed = to_uint(key, v);
        else if (key == "engine.antithetic") cfg.mc.antithetic = to_bool(key, v);
        else if (key == "engine.threads") cfg.mc.threads = static_cast<unsigned>(to_uint(key, v));
        else if (key == "output.format") cfg.format = parse_output_format(v);
        else if (key == "tables.path") cfg.tables_path = v;
        else if (key == "proxy.mode") proxy_mode = v;
        else if (key == "proxy.a" || key == "proxy.b" || key == "proxy.c" || key == "proxy.d") proxy_values[key] = num();
        else throw ConfigError(key, "unknown key");
    }

    cfg.model.law = make_law(family, law_params, parameterization);
    if (mu1 || mu2) {
        if (!(mu1 && mu2)) throw ConfigError(mu1 ? "model.mu2" : "model.mu1", "mu override needs both mu1 and mu2");
        if (!cfg.model.elliptical) throw ConfigError("model.mu1", "mu override is only available in elliptical mode");
        cfg.model.mu_override = std::array<double, 2>{*mu1, *mu2};
    }
    bool has_model = false;
    for (const auto& entry : kv) has_model = has_model || entry.first.rfind("model.", 0) == 0;
    const bool proxy_only = !has_model && (!proxy_mode.empty() || !proxy_values.empty());
    // A proxy round trip needs only the law.
    if (!proxy_only && cfg.model.a.sigma1_sq() <= 0.0) throw ConfigError("model.a11", "row 1 of A must be nonzero");
    if (!proxy_only && cfg.model.a.sigma2_sq() <= 0.0) throw ConfigError("model.a21", "row 2 of A must be nonzero");
    if (cfg.model.elliptical && (cfg.model.beta1 != 0.0 || cfg.model.beta2 != 0.0)) {
        throw ConfigError("model.beta1", "elliptical model takes no beta loadings");
    }
    if (cfg.model.elliptical && (cfg.model.delta1 != 0.0 || cfg.model.delta2 != 0.0)) {
        throw ConfigError("model.delta1", "elliptical model takes no delta locations");
    }

    if (!proxy_mode.empty() || !proxy_values.empty()) {
        auto get = [&](const std::string& k) {
            auto it = proxy_values.find(k);
            if (it == proxy_values.end()) throw ConfigError(k, "missing");
            return it->second;
        };
        const double a = positive("proxy.a", get("proxy.a"));
        if (proxy_mode == "mean_variance") cfg.proxy = ProxyParamsMV{a, get("proxy.b"), get("proxy.c"), get("proxy.d")};
        else if (proxy_mode == "variance") cfg.proxy = ProxyParamsV{a, get("proxy.b"), get("proxy.c")};
        else if (proxy_mode == "elliptical") cfg.proxy = ProxyParamsE{a, get("proxy.b"), get("proxy.c")};
        else throw ConfigError("proxy.mode", "expected mean_variance, variance or elliptical");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace spreadmm
