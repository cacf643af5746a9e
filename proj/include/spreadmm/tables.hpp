#pragma once

#include <array>
#include <string>
#include <vector>

#include "spreadmm/market_model.hpp"

namespace spreadmm {

struct TableRow {
    double s1 = 0.0;
    double s2 = 0.0;
    std::vector<double> strikes;
    std::vector<double> paper_approx;
    std::vector<double> paper_mc;
};

struct TableSpec {
    int id = 0;
    std::string title;
    MixingLaw law;
    double r = 0.0;
    std::array<double, 2> delta{0.0, 0.0};
    std::array<double, 2> beta{0.0, 0.0};
    MixingMatrix a;
    std::vector<TableRow> rows;

    ModelSpec model_for(const TableRow& row) const;
    std::size_t cell_count() const;
};

// SPREADMM_TABLES from the environment if set, else the installed data file.
std::string default_tables_path();
std::vector<TableSpec> load_tables(const std::string& path);
const TableSpec& find_table(const std::vector<TableSpec>& tables, int id);

} // namespace spreadmm
