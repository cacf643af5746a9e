#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spreadmm/commands.hpp"
#include "spreadmm/errors.hpp"

using namespace spreadmm;

int main(int argc, char** argv) {
    CLI::App app{"Spread option prices under normal mixture models"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> mgf, format;
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    app.add_option("--config", config_path, "Key-value config file");
    app.add_option("--mgf", mgf, "MGF used for matching")->check(CLI::IsMember({"exact", "truncated", "auto"}));
    app.add_option("--n", n, "Monte Carlo paths")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv"}));
    app.add_option("--tol", tol, "Quadrature tolerance")->check(CLI::PositiveNumber);

    auto* price = app.add_subcommand("price", "Approximate price of one contract");
    auto* table = app.add_subcommand("table", "Reproduce a built-in table");
    int table_id = 0;
    table->add_option("id", table_id, "Table number")->required()->check(CLI::Range(1, 6));
    auto* mc = app.add_subcommand("mc", "Monte Carlo price of one contract");
    auto* moments = app.add_subcommand("moments", "Exact spread moments and MGF arguments");
    auto* solve = app.add_subcommand("solve", "Moment matching diagnostics");
    for (auto* sub : {price, table, mc, moments, solve}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = load_config(config_path);
        } else if (!table->parsed()) {
            throw ConfigError("--config", "required for this subcommand");
        }
        if (mgf) cfg.pricing.mgf = parse_mgf_policy(*mgf);
        if (format) cfg.format = parse_output_format(*format);
        if (n) cfg.mc.n = *n;
        if (seed) cfg.mc.seed = *seed;
        if (tol) cfg.pricing.quad_tol = *tol;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }

    if (price->parsed()) return cmd_price(cfg, std::cout, std::cerr);
    if (table->parsed()) return cmd_table(table_id, cfg, std::cout, std::cerr);
    if (mc->parsed()) return cmd_mc(cfg, std::cout, std::cerr);
    if (moments->parsed()) return cmd_moments(cfg, std::cout, std::cerr);
    return cmd_solve(cfg, std::cout, std::cerr);
}
