#include "spreadmm/tables.hpp"

#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "spreadmm/config.hpp"
#include "spreadmm/errors.hpp"

namespace spreadmm {

ModelSpec TableSpec::model_for(const TableRow& row) const {
    ModelSpec m;
    m.s1_0 = row.s1;
    m.s2_0 = row.s2;
    m.r = r;
    m.delta1 = delta[0];
    m.delta2 = delta[1];
    m.beta1 = beta[0];
    m.beta2 = beta[1];
    m.a = a;
    m.law = law;
    return m;
}

std::size_t TableSpec::cell_count() const {
    std::size_t n = 0;
    for (const auto& row : rows) n += row.strikes.size();
    return n;
}

std::string default_tables_path() {
    if (const char* env = std::getenv("SPREADMM_TABLES")) return env;
    return std::string(SPREADMM_DATA_DIR) + "/tables.json";
}

std::vector<TableSpec> load_tables(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("tables.path", "cannot open '" + path + "'");
    std::vector<TableSpec> out;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        for (const auto& t : doc.at("tables")) {
            TableSpec spec;
            spec.id = t.at("id").get<int>();
            spec.title = t.value("title", "");
            const auto& law = t.at("law");
            spec.law = make_law(law.at("family").get<std::string>(), law.at("params").get<std::vector<double>>(),
                                law.value("parameterization", "mean_shape"));
            spec.r = t.value("r", 0.0);
            spec.delta = t.value("delta", std::array<double, 2>{0.0, 0.0});
            spec.beta = t.at("beta").get<std::array<double, 2>>();
            const auto a = t.at("a").get<std::array<std::array<double, 2>, 2>>();
            spec.a = {a[0][0], a[0][1], a[1][0], a[1][1]};
            for (const auto& r : t.at("rows")) {
                TableRow row;
                row.s1 = r.at("s1").get<double>();
                row.s2 = r.at("s2").get<double>();
                row.strikes = r.at("strikes").get<std::vector<double>>();
                row.paper_approx = r.value("paper_approx", std::vector<double>{});
                row.paper_mc = r.value("paper_mc", std::vector<double>{});
                if (!row.paper_approx.empty() && row.paper_approx.size() != row.strikes.size()) {
                    throw ConfigError("tables.path", "table " + std::to_string(spec.id) + ": paper_approx length mismatch");
                }
                if (!row.paper_mc.empty() && row.paper_mc.size() != row.strikes.size()) {
                    throw ConfigError("tables.path", "table " + std::to_string(spec.id) + ": paper_mc length mismatch");
                }
                spec.rows.push_back(std::move(row));
            }
            out.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("tables.path", std::string("malformed table file: ") + e.what());
    }
    return out;
}

const TableSpec& find_table(const std::vector<TableSpec>& tables, int id) {
    for (const auto& t : tables) {
        if (t.id == id) return t;
    }
    throw ConfigError("table", "no table with id " + std::to_string(id));
}

} // namespace spreadmm
