// vinodec command-line front end. Talks to the library exclusively through
// the C API in vinodec.h; emits tidy CSV/JSON/JSONL tables with a full
// provenance header so every artifact can be traced to its config.

#include "vinodec.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

// Exit codes, also documented in --help and the README.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitNotConverged = 4;
constexpr int kExitAllCellsFailed = 5;

int exit_code_for(vd_status status) {
    switch (status) {
        case VD_OK: return kExitOk;
        case VD_ERR_INVALID_ARGUMENT: return kExitValidation;
        case VD_ERR_RESOURCE: return kExitResource;
        case VD_ERR_NOT_CONVERGED: return kExitNotConverged;
        default: return 1;
    }
}

[[noreturn]] void die(vd_status status, const std::string& context) {
    std::cerr << "error (" << vd_status_name(status) << "): " << context;
    const char* detail = vd_last_error();
    if (detail && *detail) std::cerr << ": " << detail;
    std::cerr << "\n";
    std::exit(exit_code_for(status));
}

void require(vd_status status, const std::string& context) {
    if (status != VD_OK) die(status, context);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Resolved run configuration; serialized into every artifact.
struct RunConfig {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::uint64_t seed = 0;
    std::string output;  // empty = stdout
    std::string format;  // csv | json | jsonl
    std::uint64_t budget_bytes = VD_DEFAULT_BUDGET_BYTES;
    std::uint64_t grid_ops = VD_DEFAULT_GRID_OPS;
    std::uint32_t threads = 0;

    void add(const std::string& key, const std::string& value) {
        params.emplace_back(key, value);
    }

    json to_json() const {
        json c;
        c["command"] = command;
        for (const auto& [key, value] : params) c[key] = value;
        c["seed"] = std::to_string(seed);
        c["budget_bytes"] = std::to_string(budget_bytes);
        c["grid_ops_budget"] = std::to_string(grid_ops);
        c["threads"] = std::to_string(threads);
        c["format"] = format;
        return c;
    }

    std::string csv_header() const {
        std::ostringstream out;
        const json config = to_json();
        for (const auto& [key, value] : config.items())
            out << "# " << key << "=" << value.get<std::string>() << "\n";
        return out.str();
    }
};

void write_artifact(const RunConfig& cfg, const std::string& body) {
    if (cfg.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) die(VD_ERR_INVALID_ARGUMENT, "cannot open output file " + cfg.output);
    out << body;
}

// rows: array of flat objects with string/number values, identical keys.
std::string render_table(const RunConfig& cfg, const std::vector<json>& rows,
                         const json& summary) {
    if (cfg.format == "json") {
        json doc;
        doc["config"] = cfg.to_json();
        doc["rows"] = rows;
        if (!summary.empty()) doc["summary"] = summary;
        return doc.dump(2) + "\n";
    }
    if (cfg.format == "jsonl") {
        std::ostringstream out;
        out << json{{"config", cfg.to_json()}}.dump() << "\n";
        for (const json& row : rows) out << row.dump() << "\n";
        if (!summary.empty()) out << json{{"summary", summary}}.dump() << "\n";
        return out.str();
    }
    // csv
    std::ostringstream out;
    out << cfg.csv_header();
    if (!rows.empty()) {
        bool first = true;
        for (const auto& [key, value] : rows.front().items()) {
            out << (first ? "" : ",") << key;
            first = false;
        }
        out << "\n";
        for (const json& row : rows) {
            first = true;
            for (const auto& [key, value] : row.items()) {
                out << (first ? "" : ",");
                if (value.is_string())
                    out << value.get<std::string>();
                else
                    out << value.dump();
                first = false;
            }
            out << "\n";
        }
    }
    for (const auto& [key, value] : summary.items())
        out << "# " << key << "="
            << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    return out.str();
}

std::string infer_format(const std::string& requested, const std::string& path) {
    if (!requested.empty()) return requested;
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") return "jsonl";
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return "csv";
    return "json";
}

struct WeightSpec {
    std::string mode = "unit";  // unit | random | file
    std::string file;
};

vd_weights* make_weights(const WeightSpec& spec, std::uint32_t N, std::uint64_t seed) {
    vd_weights* w = nullptr;
    if (spec.mode == "unit") {
        require(vd_weights_unit(N, &w), "weights");
    } else if (spec.mode == "random") {
        require(vd_weights_random(N, seed, &w), "weights");
    } else if (spec.mode == "file") {
        std::ifstream in(spec.file);
        if (!in) die(VD_ERR_INVALID_ARGUMENT, "cannot open weights file " + spec.file);
        std::vector<double> re, im;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
            std::istringstream row(line);
            std::string n_str, re_str, im_str;
            if (!std::getline(row, n_str, ',') || !std::getline(row, re_str, ',') ||
                !std::getline(row, im_str, ','))
                die(VD_ERR_INVALID_ARGUMENT,
                    "weights file rows must be n,re,im: " + line);
            const std::size_t n = std::stoull(n_str);
            if (n != re.size() + 1)
                die(VD_ERR_INVALID_ARGUMENT, "weights file must list n = 1..N in order");
            re.push_back(std::stod(re_str));
            im.push_back(std::stod(im_str));
        }
        if (N != 0 && N != re.size())
            die(VD_ERR_INVALID_ARGUMENT, "--N disagrees with weights file length");
        require(vd_weights_from_arrays(static_cast<std::uint32_t>(re.size()), re.data(),
                                       im.data(), &w),
                "weights");
    } else {
        die(VD_ERR_INVALID_ARGUMENT, "unknown weight mode " + spec.mode);
    }
    return w;
}

json ratio_report_json(const vd_ratio_report& report) {
    json grid = json::array();
    for (int i = 0; i < report.grid_dims; ++i) grid.push_back(report.grid[i]);
    json out;
    out["value"] = format_double(report.value);
    out["grid"] = grid;
    out["converged"] = report.converged != 0;
    out["estimate_error"] = format_double(report.estimate_error);
    return out;
}

std::vector<std::uint32_t> parse_N_list(const std::vector<std::string>& items) {
    std::vector<std::uint32_t> out;
    for (const std::string& item : items) {
        std::istringstream ss(item);
        std::string piece;
        while (std::getline(ss, piece, ','))
            if (!piece.empty()) out.push_back(std::stoul(piece));
    }
    if (out.empty()) die(VD_ERR_INVALID_ARGUMENT, "--N needs at least one value");
    return out;
}

/* ---------------- commands ---------------- */

int run_count(RunConfig cfg, const std::vector<std::string>& N_items, std::uint32_t s,
              std::uint32_t k) {
    const std::vector<std::uint32_t> Ns = parse_N_list(N_items);
    cfg.add("k", std::to_string(k));
    cfg.add("s", std::to_string(s));
    {
        std::ostringstream ns;
        for (std::size_t i = 0; i < Ns.size(); ++i) ns << (i ? "," : "") << Ns[i];
        cfg.add("N", ns.str());
    }

    vd_scan* scan = nullptr;
    require(vd_mean_value_scan(Ns.data(), Ns.size(), s, k, cfg.budget_bytes,
                               cfg.threads, &scan),
            "count");
    const bool sweep = Ns.size() > 1;
    if (!sweep && vd_scan_row_ok(scan, 0) == 0) {
        const std::string error = vd_scan_row_error(scan, 0);
        vd_scan_free(scan);
        die(error == "resource" ? VD_ERR_RESOURCE : VD_ERR_INTERNAL,
            "count N=" + std::to_string(Ns[0]));
    }
    std::vector<json> rows;
    std::size_t failed = 0;
    for (std::uint64_t r = 0; r < vd_scan_rows(scan); ++r) {
        json row;
        row["k"] = k;
        row["s"] = s;
        row["N"] = vd_scan_row_N(scan, r);
        const bool ok = vd_scan_row_ok(scan, r) != 0;
        row["J"] = ok ? vd_scan_row_J(scan, r) : "";
        row["distinct_vectors"] = vd_scan_row_distinct(scan, r);
        row["elapsed_ms"] = format_double(vd_scan_row_elapsed_ms(scan, r));
        if (sweep) {
            row["rho"] = format_double(vd_scan_row_rho(scan, r));
            row["ok"] = ok ? 1 : 0;
            row["error"] = vd_scan_row_error(scan, r);
        }
        if (!ok) ++failed;
        rows.push_back(std::move(row));
    }
    json summary;
    if (Ns.size() > 1) {
        summary["slope_log_J"] = format_double(vd_scan_slope_log_J(scan));
        summary["slope_log_rho"] = format_double(vd_scan_slope_log_rho(scan));
    }
    vd_scan_free(scan);
    write_artifact(cfg, render_table(cfg, rows, summary));
    if (failed == Ns.size()) return kExitAllCellsFailed;
    return kExitOk;
}

int run_moment(RunConfig cfg, std::uint32_t N, std::uint32_t s, std::uint32_t k,
               const WeightSpec& weights, const std::string& path_name) {
    cfg.add("k", std::to_string(k));
    cfg.add("s", std::to_string(s));
    cfg.add("N", std::to_string(N));
    cfg.add("weights", weights.mode);
    if (!weights.file.empty()) cfg.add("weights_file", weights.file);
    cfg.add("path", path_name);

    vd_moment_path path = VD_MOMENT_AUTO;
    if (path_name == "quadrature") path = VD_MOMENT_QUADRATURE;
    else if (path_name == "identity") path = VD_MOMENT_IDENTITY;
    else if (path_name != "auto")
        die(VD_ERR_INVALID_ARGUMENT, "unknown moment path " + path_name);

    vd_weights* w = make_weights(weights, N, cfg.seed);
    double value = 0.0;
    const vd_status status = vd_moment(k, s, w, path, cfg.grid_ops, cfg.budget_bytes,
                                       cfg.threads, &value);
    vd_weights_free(w);
    require(status, "moment");

    json row;
    row["k"] = k;
    row["s"] = s;
    row["N"] = N;
    row["path"] = path_name;
    row["value"] = format_double(value);
    row["model"] = "periodic-single-frequency";
    write_artifact(cfg, render_table(cfg, {row}, {}));
    return kExitOk;
}

int run_ratio(RunConfig cfg, std::uint32_t N, std::uint32_t k,
              const WeightSpec& weights) {
    cfg.add("k", std::to_string(k));
    cfg.add("N", std::to_string(N));
    cfg.add("weights", weights.mode);
    if (!weights.file.empty()) cfg.add("weights_file", weights.file);

    vd_weights* w = make_weights(weights, N, cfg.seed);
    vd_ratio_report report{};
    const vd_status status = vd_decoupling_ratio(k, w, cfg.grid_ops, cfg.budget_bytes,
                                                 cfg.threads, &report);
    const std::uint32_t actual_N = vd_weights_N(w);
    vd_weights_free(w);
    require(status, "ratio");

    int64_t p_k = 0;
    require(vd_critical_exponent(k, &p_k), "ratio");
    json row;
    row["k"] = k;
    row["N"] = actual_N;
    row["p"] = p_k;
    row.update(ratio_report_json(report));
    row["seed"] = std::to_string(cfg.seed);
    row["model"] = "periodic-single-frequency";
    write_artifact(cfg, render_table(cfg, {row}, {}));
    return kExitOk;
}

int run_growth(RunConfig cfg, const std::vector<std::string>& N_items, std::uint32_t k,
               const WeightSpec& weights) {
    const std::vector<std::uint32_t> Ns = parse_N_list(N_items);
    cfg.add("k", std::to_string(k));
    {
        std::ostringstream ns;
        for (std::size_t i = 0; i < Ns.size(); ++i) ns << (i ? "," : "") << Ns[i];
        cfg.add("N", ns.str());
    }
    cfg.add("weights", weights.mode);

    const vd_weight_mode mode =
        weights.mode == "random" ? VD_WEIGHTS_RANDOM : VD_WEIGHTS_UNIT;
    if (weights.mode == "file")
        die(VD_ERR_INVALID_ARGUMENT, "growth sweeps take unit or random weights");
    std::vector<double> D(Ns.size(), 0.0);
    double slope = 0.0;
    require(vd_growth_exponent(k, Ns.data(), Ns.size(), mode, cfg.seed, cfg.grid_ops,
                               cfg.budget_bytes, cfg.threads, D.data(), &slope),
            "growth");
    std::vector<json> rows;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        json row;
        row["k"] = k;
        row["N"] = Ns[i];
        row["D"] = format_double(D[i]);
        row["model"] = "periodic-single-frequency";
        rows.push_back(std::move(row));
    }
    json summary;
    summary["slope"] = format_double(slope);
    write_artifact(cfg, render_table(cfg, rows, summary));
    return kExitOk;
}

int run_bilinear(RunConfig cfg, std::uint32_t N, std::uint32_t k, std::uint64_t arc,
                 std::uint64_t arc_prime, const WeightSpec& weights) {
    cfg.add("k", std::to_string(k));
    cfg.add("N", std::to_string(N));
    cfg.add("arc", std::to_string(arc));
    cfg.add("arc_prime", std::to_string(arc_prime));
    cfg.add("weights", weights.mode);
    if (!weights.file.empty()) cfg.add("weights_file", weights.file);

    vd_weights* w = make_weights(weights, N, cfg.seed);
    vd_ratio_report report{};
    const vd_status status =
        vd_bilinear_ratio(k, N, {2, arc}, {2, arc_prime}, w, 0.0, 0, cfg.grid_ops,
                          cfg.threads, &report);
    vd_weights_free(w);
    if (status != VD_OK && status != VD_ERR_NOT_CONVERGED) die(status, "bilinear");

    int64_t p_k = 0;
    require(vd_critical_exponent(k, &p_k), "bilinear");
    json row;
    row["k"] = k;
    row["N"] = N;
    row["p"] = p_k;
    row["arc"] = arc;
    row["arc_prime"] = arc_prime;
    row.update(ratio_report_json(report));
    row["seed"] = std::to_string(cfg.seed);
    row["model"] = "periodic-single-frequency";
    write_artifact(cfg, render_table(cfg, {row}, {}));
    return status == VD_ERR_NOT_CONVERGED ? kExitNotConverged : kExitOk;
}

int run_whitney(RunConfig cfg, std::int32_t N, const std::string& emit_path) {
    cfg.add("N", std::to_string(N));
    if (!emit_path.empty()) cfg.add("emit", emit_path);

    std::uint64_t count = 0;
    require(vd_whitney_size(VD_WHITNEY_COVER, N, &count), "whitney");
    std::vector<vd_whitney_square> squares(count);
    require(vd_whitney_squares(VD_WHITNEY_COVER, N, squares.data(), count, &count),
            "whitney");

    if (!emit_path.empty()) {
        // Line-delimited records (scale, i-index, j-index, class) for plotting.
        std::ofstream out(emit_path, std::ios::binary);
        if (!out) die(VD_ERR_INVALID_ARGUMENT, "cannot open " + emit_path);
        for (const vd_whitney_square& sq : squares) {
            json rec;
            rec["scale"] = sq.scale;
            rec["i"] = sq.i;
            rec["j"] = sq.j;
            rec["class"] = sq.diagonal ? "diagonal" : "offdiagonal";
            out << rec.dump() << "\n";
        }
    }

    char area[128];
    std::int32_t disjoint = 0;
    require(vd_whitney_cover_stats(N, area, sizeof(area), &disjoint), "whitney");
    std::int32_t max_diag = 0;
    std::vector<std::int32_t> max_off(N - 1, 0);
    require(vd_whitney_multiplicity(N, &max_diag, max_off.data()), "whitney");

    std::uint64_t diag_count = 0;
    require(vd_whitney_size(VD_WHITNEY_DIAGONAL, N, &diag_count), "whitney");

    json row;
    row["N"] = N;
    row["cover_squares"] = count;
    row["diagonal_squares"] = diag_count;
    row["area"] = area;
    row["interiors_disjoint"] = disjoint != 0;
    row["max_diagonal_multiplicity"] = max_diag;
    json per_level = json::array();
    for (std::size_t i = 0; i < max_off.size(); ++i)
        per_level.push_back(json{{"level", i + 2}, {"max_multiplicity", max_off[i]}});
    row["max_offdiagonal_multiplicity"] = per_level;
    write_artifact(cfg, render_table(cfg, {row}, {}));
    return kExitOk;
}

int run_geometry(RunConfig cfg, const std::string& op, std::int32_t k_min,
                 std::int32_t k_max, std::int32_t k, std::int32_t l, double xi1,
                 double xi2, std::int32_t level, std::uint64_t index,
                 std::int32_t level2, std::uint64_t index2) {
    cfg.add("op", op);
    std::vector<json> rows;
    json summary;

    if (op == "transversality-table") {
        cfg.add("k_min", std::to_string(k_min));
        cfg.add("k_max", std::to_string(k_max));
        bool all_match = true;
        for (std::int32_t kk = k_min; kk <= k_max; ++kk) {
            for (std::int32_t ll = 1; ll <= kk - 1; ++ll) {
                double value = 0.0;
                require(vd_transversality_value(kk, ll, 0.0, 1.0, &value), op);
                char expected[128];
                require(vd_transversality_constant(kk, ll, expected, sizeof(expected)),
                        op);
                const double expected_value = std::stod(expected);
                const double rel_err =
                    std::abs(value - expected_value) / expected_value;
                const bool match = rel_err < 1e-9;
                all_match = all_match && match;
                json row;
                row["k"] = kk;
                row["l"] = ll;
                row["value"] = format_double(value);
                row["expected"] = expected;
                row["rel_err"] = format_double(rel_err);
                row["match"] = match ? 1 : 0;
                rows.push_back(std::move(row));
            }
        }
        summary["all_match"] = all_match;
    } else if (op == "transversality") {
        cfg.add("k", std::to_string(k));
        cfg.add("l", std::to_string(l));
        cfg.add("xi1", format_double(xi1));
        cfg.add("xi2", format_double(xi2));
        double value = 0.0;
        require(vd_transversality_value(k, l, xi1, xi2, &value), op);
        json row;
        row["k"] = k;
        row["l"] = l;
        row["xi1"] = format_double(xi1);
        row["xi2"] = format_double(xi2);
        row["value"] = format_double(value);
        rows.push_back(std::move(row));
    } else if (op == "cap") {
        cfg.add("k", std::to_string(k));
        cfg.add("level", std::to_string(level));
        cfg.add("index", std::to_string(index));
        std::vector<double> center(k), axes(k * k), hw(k);
        require(vd_cap({level, index}, k, center.data(), axes.data(), hw.data()), op);
        double volume = 0.0;
        require(vd_cap_volume({level, index}, k, &volume), op);
        json row;
        row["k"] = k;
        row["level"] = level;
        row["index"] = index;
        row["center"] = center;
        row["axes"] = axes;
        row["half_widths"] = hw;
        row["volume"] = format_double(volume);
        rows.push_back(std::move(row));
    } else if (op == "rescale") {
        cfg.add("k", std::to_string(k));
        cfg.add("I", std::to_string(level) + ":" + std::to_string(index));
        cfg.add("J", std::to_string(level2) + ":" + std::to_string(index2));
        double residual = 0.0;
        require(vd_verify_cap_rescaling({level, index}, {level2, index2}, k, &residual),
                op);
        json row;
        row["k"] = k;
        row["residual"] = format_double(residual);
        rows.push_back(std::move(row));
    } else if (op == "torsion") {
        cfg.add("k", std::to_string(k));
        cfg.add("l", std::to_string(l));
        cfg.add("xi_prime", format_double(xi1));
        std::vector<double> grid;
        for (int i = 0; i <= 64; ++i) grid.push_back(xi2 + (1.0 - xi2) * i / 64.0);
        double minimum = 0.0;
        require(vd_projected_torsion(k, l, xi1, grid.data(), grid.size(), &minimum),
                op);
        json row;
        row["k"] = k;
        row["l"] = l;
        row["xi_prime"] = format_double(xi1);
        row["grid_start"] = format_double(xi2);
        row["grid_points"] = grid.size();
        row["min_projected_wedge"] = format_double(minimum);
        rows.push_back(std::move(row));
    } else {
        die(VD_ERR_INVALID_ARGUMENT, "unknown geometry op " + op);
    }
    write_artifact(cfg, render_table(cfg, rows, summary));
    return kExitOk;
}

int run_exponents(RunConfig cfg, std::int32_t k, bool verify, std::int32_t l) {
    cfg.add("k", std::to_string(k));
    cfg.add("verify", verify ? "true" : "false");
    if (l > 0) cfg.add("l", std::to_string(l));

    int64_t p_k = 0;
    require(vd_critical_exponent(k, &p_k), "exponents");

    json row;
    row["k"] = k;
    row["p_k"] = p_k;

    vd_system* sys = nullptr;
    require(vd_system_build(k, &sys), "exponents");
    const std::int32_t dim = vd_system_dim(sys);
    json M = json::array();
    char buf[160];
    for (std::int32_t r = 0; r < dim; ++r) {
        json mrow = json::array();
        for (std::int32_t c = 0; c < dim; ++c) {
            require(vd_system_entry(sys, r, c, buf, sizeof(buf)), "exponents");
            mrow.push_back(std::string(buf));
        }
        M.push_back(std::move(mrow));
    }
    json c_vec = json::array();
    for (std::int32_t r = 0; r < dim; ++r) {
        require(vd_system_source(sys, r, buf, sizeof(buf)), "exponents");
        c_vec.push_back(std::string(buf));
    }
    vd_system_free(sys);
    row["M"] = M;
    row["c"] = c_vec;

    if (verify) {
        std::int32_t left_ok = 0;
        require(vd_verify_cancellation(k, &left_ok, buf, sizeof(buf)), "exponents");
        row["left_vector_ok"] = left_ok != 0;
        row["eta_coefficient"] = std::string(buf);
        // eta <= 0 from the cancellation, eta >= 0 from D >= 1: reported as 0.
        row["eta"] = "0";
    }
    if (l > 0) {
        require(vd_holder_theta(k, l, buf, sizeof(buf)), "exponents");
        row["theta"] = std::string(buf);
        require(vd_finiteness_slope(k, l, buf, sizeof(buf)), "exponents");
        row["sigma"] = std::string(buf);
        require(vd_validity_range(k, l, buf, sizeof(buf)), "exponents");
        row["b_max"] = std::string(buf);
    }
    write_artifact(cfg, render_table(cfg, {row}, {}));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "vinodec: exact Vinogradov mean values, torus decoupling ratios, "
        "moment-curve cap geometry, Whitney decompositions, and the exponent "
        "bootstrap system.\n"
        "Exit codes: 0 ok, 2 validation, 3 resource budget, 4 not converged, "
        "5 all sweep cells failed."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value config file overriding defaults");

    RunConfig cfg;
    std::string format;
    app.add_option("--out", cfg.output, "output file (default stdout)");
    app.add_option("--format", format, "csv|json|jsonl (default from extension)");
    app.add_option("--seed", cfg.seed, "seed recorded in all outputs");
    app.add_option("--budget-bytes", cfg.budget_bytes, "memory budget for histograms")
        ->envname("VINODEC_BUDGET_BYTES");
    app.add_option("--grid-budget", cfg.grid_ops, "work budget for grid evaluation")
        ->envname("VINODEC_GRID_OPS");
    app.add_option("--threads", cfg.threads, "worker threads (0 = auto)");

    // count
    auto* count = app.add_subcommand("count", "exact Vinogradov mean value J_{s,k}(N)");
    std::vector<std::string> count_N;
    std::uint32_t count_s = 1, count_k = 1;
    count->add_option("--N", count_N, "range N (repeat or comma-separate for a sweep)")
        ->required();
    count->add_option("--s", count_s, "tuple length s")->required();
    count->add_option("--k", count_k, "degree k")->required();

    // moment
    auto* moment = app.add_subcommand("moment", "even moment of a Weyl sum");
    std::uint32_t mom_N = 0, mom_s = 1, mom_k = 1;
    WeightSpec mom_w;
    std::string mom_path = "auto";
    moment->add_option("--N", mom_N, "range N")->required();
    moment->add_option("--s", mom_s, "moment order (integrand |f|^{2s})")->required();
    moment->add_option("--k", mom_k, "degree k")->required();
    moment->add_option("--weights", mom_w.mode, "unit|random|file");
    moment->add_option("--weights-file", mom_w.file, "CSV of n,re,im rows");
    moment->add_option("--path", mom_path, "auto|quadrature|identity");

    // ratio
    auto* ratio = app.add_subcommand("ratio", "decoupling ratio at delta = 1/N");
    std::uint32_t ratio_N = 0, ratio_k = 1;
    WeightSpec ratio_w;
    ratio->add_option("--N", ratio_N, "range N")->required();
    ratio->add_option("--k", ratio_k, "degree k")->required();
    ratio->add_option("--weights", ratio_w.mode, "unit|random|file");
    ratio->add_option("--weights-file", ratio_w.file, "CSV of n,re,im rows");

    // growth
    auto* growth = app.add_subcommand("growth", "slope of log D(N) over an N sweep");
    std::vector<std::string> growth_N;
    std::uint32_t growth_k = 1;
    WeightSpec growth_w;
    growth->add_option("--N", growth_N, "ascending N list")->required();
    growth->add_option("--k", growth_k, "degree k")->required();
    growth->add_option("--weights", growth_w.mode, "unit|random");

    // bilinear
    auto* bilinear = app.add_subcommand("bilinear", "symmetric bilinear ratio");
    std::uint32_t bil_N = 0, bil_k = 1;
    std::uint64_t bil_arc = 0, bil_arc_prime = 2;
    WeightSpec bil_w;
    bilinear->add_option("--N", bil_N, "range N")->required();
    bilinear->add_option("--k", bil_k, "degree k")->required();
    bilinear->add_option("--arc", bil_arc, "index of I in the level-2 partition")
        ->required();
    bilinear->add_option("--arc-prime", bil_arc_prime, "index of I'")->required();
    bilinear->add_option("--weights", bil_w.mode, "unit|random|file");
    bilinear->add_option("--weights-file", bil_w.file, "CSV of n,re,im rows");

    // whitney
    auto* whitney = app.add_subcommand("whitney", "Whitney cover of the unit square");
    std::int32_t whit_N = 2;
    std::string whit_emit;
    whitney->add_option("--N", whit_N, "finest level")->required();
    whitney->add_option("--emit", whit_emit, "write squares as JSONL records");

    // geometry
    auto* geometry = app.add_subcommand("geometry", "moment-curve geometry probes");
    std::string geo_op = "transversality-table";
    std::int32_t geo_kmin = 2, geo_kmax = 8, geo_k = 2, geo_l = 1;
    double geo_xi1 = 0.0, geo_xi2 = 1.0;
    std::int32_t geo_level = 0, geo_level2 = 0;
    std::uint64_t geo_index = 0, geo_index2 = 0;
    geometry->add_option(
        "--op", geo_op, "transversality-table|transversality|cap|rescale|torsion");
    geometry->add_option("--k-min", geo_kmin, "table sweep start");
    geometry->add_option("--k-max", geo_kmax, "table sweep end");
    geometry->add_option("--k", geo_k, "degree k");
    geometry->add_option("--l", geo_l, "split l");
    geometry->add_option("--xi1", geo_xi1, "first parameter (xi' for torsion)");
    geometry->add_option("--xi2", geo_xi2, "second parameter (grid start for torsion)");
    geometry->add_option("--level", geo_level, "interval level");
    geometry->add_option("--index", geo_index, "interval index");
    geometry->add_option("--level2", geo_level2, "second interval level");
    geometry->add_option("--index2", geo_index2, "second interval index");

    // exponents
    auto* exponents = app.add_subcommand("exponents", "bootstrap system in exact rationals");
    std::int32_t exp_k = 2, exp_l = 0;
    bool exp_verify = false;
    exponents->add_option("--k", exp_k, "degree k")->required();
    exponents->add_flag("--verify", exp_verify, "verify the left-eigenvector cancellation");
    exponents->add_option("--l", exp_l, "also report theta, sigma, b_max for this split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitValidation;
    }

    cfg.format = infer_format(format, cfg.output);
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "jsonl") {
        std::cerr << "error: unknown format " << cfg.format << "\n";
        return kExitValidation;
    }

    try {
        if (count->parsed()) {
            cfg.command = "count";
            return run_count(cfg, count_N, count_s, count_k);
        }
        if (moment->parsed()) {
            cfg.command = "moment";
            return run_moment(cfg, mom_N, mom_s, mom_k, mom_w, mom_path);
        }
        if (ratio->parsed()) {
            cfg.command = "ratio";
            return run_ratio(cfg, ratio_N, ratio_k, ratio_w);
        }
        if (growth->parsed()) {
            cfg.command = "growth";
            return run_growth(cfg, growth_N, growth_k, growth_w);
        }
        if (bilinear->parsed()) {
            cfg.command = "bilinear";
            return run_bilinear(cfg, bil_N, bil_k, bil_arc, bil_arc_prime, bil_w);
        }
        if (whitney->parsed()) {
            cfg.command = "whitney";
            return run_whitney(cfg, whit_N, whit_emit);
        }
        if (geometry->parsed()) {
            cfg.command = "geometry";
            return run_geometry(cfg, geo_op, geo_kmin, geo_kmax, geo_k, geo_l, geo_xi1,
                                geo_xi2, geo_level, geo_index, geo_level2, geo_index2);
        }
        if (exponents->parsed()) {
            cfg.command = "exponents";
            return run_exponents(cfg, exp_k, exp_verify, exp_l);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
