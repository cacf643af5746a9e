#include "spreadmm/commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "spreadmm/errors.hpp"
#include "spreadmm/tables.hpp"

namespace spreadmm {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Report {
public:
    explicit Report(OutputFormat format) : format_(format) {}

    void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, format_number(value)); }
    void add(const std::string& key, long long value) { add(key, std::to_string(value)); }

    void write(std::ostream& out) const {
        if (format_ == OutputFormat::Csv) {
            out << "key,value\n";
            for (const auto& [k, v] : rows_) out << csv_escape(k) << ',' << csv_escape(v) << '\n';
            return;
        }
        std::size_t width = 0;
        for (const auto& row : rows_) width = std::max(width, row.first.size());
        for (const auto& [k, v] : rows_) out << std::left << std::setw(static_cast<int>(width + 2)) << k << v << '\n';
    }

private:
    OutputFormat format_;
    std::vector<std::pair<std::string, std::string>> rows_;
};

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

MgfKind kind_for(MgfPolicy p) {
    return p == MgfPolicy::Truncated ? MgfKind::Truncated : MgfKind::Exact;
}

void add_moments(Report& r, const MomentSet& m, const MixingLaw& law) {
    r.add("mode", to_string(m.mode));
    r.add("mgf_kind", to_string(m.mgf_kind));
    for (int n = 1; n <= m.order(); ++n) r.add("M" + std::to_string(n), m.at(n));
    if (m.mode != MomentMode::Elliptical) r.add("domain_bound", law.domain_bound());
    for (const auto& a : m.arguments) r.add("argument " + a.label, a.value);
}

void add_match(Report& r, const MatchReport& m) {
    r.add("params", describe(m.params));
    r.add("match_mgf_kind", to_string(m.mgf_kind));
    r.add("residual_norm", m.residual_norm);
    r.add("iterations", static_cast<long long>(m.iterations));
    r.add("starts_tried", static_cast<long long>(m.starts_tried));
    r.add("symmetric_limit", m.symmetric_limit ? "yes" : "no");
}

std::string cell(double v) { return std::isnan(v) ? "nan" : format_number(v); }

} // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return kExitConfig;
    if (dynamic_cast<const NoSolution*>(&e)) return kExitSolver;
    if (dynamic_cast<const MgfDomainError*>(&e)) return kExitMgfDomain;
    if (dynamic_cast<const QuadratureError*>(&e) || dynamic_cast<const SeriesDivergence*>(&e) ||
        dynamic_cast<const MomentsUnavailable*>(&e)) {
        return kExitNumerics;
    }
    return kExitFailure;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int cmd_price(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        PriceReport p = price_spread_approx(cfg.model, cfg.contract, cfg.pricing);
        Report r(cfg.format);
        r.add("price", p.price);
        r.add("strike", cfg.contract.strike);
        r.add("branch", to_string(p.branch));
        r.add("floored", p.floored ? "yes" : "no");
        if (p.floored) r.add("raw_price", p.raw_price);
        r.add("quadrature_error", p.quadrature_error_estimate);
        r.add("law", p.law);
        r.add("mgf_policy", to_string(cfg.pricing.mgf));
        add_match(r, p.match);
        add_moments(r, p.target, cfg.model.law);
        for (const auto& note : p.notes) r.add("note", note);
        r.write(out);
        return int(kExitOk);
    });
}

int cmd_mc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        EffectiveModel model = build_effective(cfg.model, cfg.contract.maturity);
        McEstimate e = mc_spread_price(model, cfg.contract, cfg.mc);
        Report r(cfg.format);
        r.add("mc_price", e.mean);
        r.add("mc_stderr", e.std_error);
        r.add("strike", cfg.contract.strike);
        r.add("n", static_cast<long long>(e.n));
        r.add("seed", std::to_string(e.seed));
        r.add("antithetic", cfg.mc.antithetic ? "yes" : "no");
        r.write(out);
        return int(kExitOk);
    });
}

int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        EffectiveModel model = build_effective(cfg.model, cfg.contract.maturity);
        MomentSet m = exact_moments(model, kind_for(cfg.pricing.mgf), cfg.pricing.match.series_tol);
        Report r(cfg.format);
        r.add("mu1", model.mu1);
        r.add("mu2", model.mu2);
        add_moments(r, m, model.law);
        r.write(out);
        return int(kExitOk);
    });
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Report r(cfg.format);
        const MixingLaw& law = cfg.model.law;
        if (cfg.proxy) {
            const MgfKind kind = kind_for(cfg.pricing.mgf);
            MomentSet target = proxy_moments(*cfg.proxy, law, kind, cfg.pricing.match.series_tol);
            MatchReport m = match(target, law, kind, cfg.pricing.match);
            r.add("source", "proxy round trip");
            r.add("input_params", describe(*cfg.proxy));
            add_match(r, m);
            add_moments(r, target, law);
        } else {
            MatchedSpread m = match_spread(cfg.model, cfg.contract.maturity, cfg.pricing);
            r.add("source", "model moments");
            add_match(r, m.match);
            add_moments(r, m.target, law);
            for (const auto& note : m.notes) r.add("note", note);
        }
        r.write(out);
        return int(kExitOk);
    });
}

int cmd_table(int table_id, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string path = cfg.tables_path.empty() ? default_tables_path() : cfg.tables_path;
        const std::vector<TableSpec> tables = load_tables(path);
        const TableSpec& table = find_table(tables, table_id);

        const std::vector<std::string> header{"table", "s1", "s2", "strike", "approx_price", "mc_price", "mc_stderr",
                                              "abs_diff", "paper_approx", "paper_mc", "mgf_kind", "seed", "note"};
        struct RowResult {
            std::vector<std::vector<std::string>> lines;
            std::string error;
            int status = kExitOk;
        };
        auto evaluate = [&](const TableRow& row) {
            RowResult res;
            const ModelSpec spec = table.model_for(row);
            std::vector<double> approx(row.strikes.size(), std::nan(""));
            std::vector<McEstimate> mc(row.strikes.size(), McEstimate{std::nan(""), std::nan(""), 0, cfg.mc.seed});
            std::string kind = "-";
            std::string note;
            try {
                MatchedSpread matched = match_spread(spec, 1.0, cfg.pricing);
                kind = matched.match.symmetric_limit ? "limit" : to_string(matched.match.mgf_kind);
                for (std::size_t i = 0; i < row.strikes.size(); ++i) {
                    approx[i] = price_matched(matched, row.strikes[i], cfg.pricing).price;
                }
            } catch (const std::exception& e) {
                note = e.what();
                res.status = exit_code_for(e);
            }
            try {
                mc = mc_spread_prices(build_effective(spec, 1.0), row.strikes, cfg.mc);
            } catch (const std::exception& e) {
                if (note.empty()) note = e.what();
                if (res.status == kExitOk) res.status = exit_code_for(e);
            }
            if (!note.empty()) {
                std::ostringstream msg;
                msg << "table " << table_id << " row (" << row.s1 << ", " << row.s2 << "): " << note << '\n';
                res.error = msg.str();
            }
            for (std::size_t i = 0; i < row.strikes.size(); ++i) {
                const double pa = i < row.paper_approx.size() ? row.paper_approx[i] : std::nan("");
                const double pm = i < row.paper_mc.size() ? row.paper_mc[i] : std::nan("");
                res.lines.push_back({std::to_string(table.id), format_number(row.s1), format_number(row.s2),
                                     format_number(row.strikes[i]), cell(approx[i]), cell(mc[i].mean),
                                     cell(mc[i].std_error), cell(std::abs(approx[i] - mc[i].mean)), cell(pa),
                                     cell(pm), kind, std::to_string(cfg.mc.seed), note});
            }
            return res;
        };

        // Rows run concurrently; output order is fixed by the row index.
        std::vector<std::future<RowResult>> pending;
        for (const TableRow& row : table.rows) {
            pending.push_back(std::async(cfg.mc.threads == 1 ? std::launch::deferred : std::launch::async, evaluate,
                                         std::cref(row)));
        }
        std::vector<std::vector<std::string>> lines;
        int status = kExitOk;
        for (auto& f : pending) {
            RowResult res = f.get();
            err << res.error;
            if (status == kExitOk) status = res.status;
            for (auto& line : res.lines) lines.push_back(std::move(line));
        }

        if (cfg.format == OutputFormat::Csv) {
            for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
            out << '\n';
            for (const auto& line : lines) {
                for (std::size_t i = 0; i < line.size(); ++i) out << (i ? "," : "") << csv_escape(line[i]);
                out << '\n';
            }
            return status;
        }
        out << "Table " << table.id << ": " << table.title << " (" << table.law.describe() << "), n=" << cfg.mc.n
            << ", seed=" << cfg.mc.seed << '\n';
        // The seed column is in the title line; the note column goes last, unpadded.
        std::vector<std::size_t> width(header.size() - 2, 0);
        for (std::size_t i = 0; i < width.size(); ++i) {
            width[i] = header[i].size();
            for (const auto& line : lines) width[i] = std::max(width[i], line[i].size());
        }
        auto print = [&](const std::vector<std::string>& line) {
            for (std::size_t i = 0; i < width.size(); ++i) {
                out << std::left << std::setw(static_cast<int>(width[i] + 2)) << line[i];
            }
            out << line.back() << '\n';
        };
        std::vector<std::string> head(header.begin(), header.end() - 2);
        head.push_back("note");
        print(head);
        for (const auto& line : lines) print(line);
        return status;
    });
}

} // namespace spreadmm
