/** \file cli.cpp
 *  \brief Implementation of the command-line front end.
 */
#include "confinium/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "confinium/eigensolve.hpp"
#include "confinium/errors.hpp"
#include "confinium/model.hpp"
#include "confinium/observables.hpp"
#include "confinium/report.hpp"

#ifndef CONFINIUM_VERSION
#define CONFINIUM_VERSION "0.0.0"
#endif

namespace confinium::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

/// Identity thresholds applied by `solve`, `sweep` and `selftest`: a state
/// passes when the four fluctuation routes agree, the two second-moment
/// routes agree, and the Hamiltonian variance vanishes, each at 1e-6
/// relative to its natural scale.  These are part of the tool's contract
/// (the acceptance suite pins the same values) and are not configurable.
constexpr double kIdentityTolScale = 1e-6;

/// Relative tolerance of the selftest free-limit anchors.
constexpr double kAnchorTolRel = 1e-8;

/// Relative agreement demanded between the matrix and shooting backends.
constexpr double kBackendTolRel = 1e-7;

// ---------------------------------------------------------------------------
// small utilities
// ---------------------------------------------------------------------------

/// Parse a flag/config number; accepts "inf"/"infinity" (case-insensitive,
/// optional sign) for infinite walls.  Throws ParameterError on junk.
double parse_number(const std::string& text) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            t.end());
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    bool negative = false;
    if (!lower.empty() && (lower.front() == '+' || lower.front() == '-')) {
        negative = lower.front() == '-';
        lower.erase(lower.begin());
    }
    if (lower == "inf" || lower == "infinity") {
        const double inf = std::numeric_limits<double>::infinity();
        return negative ? -inf : inf;
    }
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || t.empty()) {
        std::ostringstream os;
        os << "not a number: \"" << text << "\"";
        throw ParameterError(os.str());
    }
    return value;
}

/// %.*g with a clamped digit count.
std::string fmt(double value, int digits) {
    digits = std::clamp(digits, 1, 17);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

/// Full-precision form used by the CSV writers (round-trips exactly).
std::string fmt_full(double value) { return fmt(value, 17); }

/// Right-align `text` in a cell of width `width` (two-space separator).
std::string cell(const std::string& text, std::size_t width) {
    std::string s;
    if (text.size() < width) s.assign(width - text.size(), ' ');
    return s + text + "  ";
}

bool identities_pass(const observables::VirialReport& vr) {
    const double spread_tol = kIdentityTolScale * std::max(1.0, std::abs(vr.dV2));
    const double gap_tol = kIdentityTolScale * std::max(1.0, std::abs(vr.t2_direct));
    const double dh2_tol = kIdentityTolScale * std::max(1.0, vr.energy * vr.energy);
    return vr.spread <= spread_tol && vr.t2_gap <= gap_tol && vr.dH2 <= dh2_tol;
}

model::TruncationPolicy make_policy(const RunConfig& cfg) {
    model::TruncationPolicy policy;
    if (cfg.grid_n > 0) policy.grid_n = cfg.grid_n;
    if (cfg.rmax > 0) policy.initial_rmax = cfg.rmax;
    return policy;
}

/// Canonical parameter key for a (possibly abbreviated) flag spelling.
std::string normalize_param_key(const std::string& key) {
    std::string lower = key;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    static const std::map<std::string, std::string> kMap = {
        {"omega", "omega"}, {"xc", "x_c"},  {"x_c", "x_c"}, {"rc", "r_c"},
        {"r_c", "r_c"},     {"ra", "r_a"},  {"r_a", "r_a"}, {"rb", "r_b"},
        {"r_b", "r_b"},     {"k", "k"},     {"v0", "V0"},   {"u0", "U0"},
        {"w", "w"},
    };
    auto it = kMap.find(lower);
    if (it == kMap.end()) {
        std::ostringstream os;
        os << "unknown parameter key \"" << key
           << "\" (expected one of omega, xc, rc, ra, rb, k, v0, u0, w)";
        throw ParameterError(os.str());
    }
    return it->second;
}

/// Build the system from the kind name, per-kind defaults, and the field
/// assignments collected from the flags.  Defaults: oscillators have
/// omega = 1 and an infinite box (free); cha/hicha are free with cage
/// exponent k = 2; hpcha has r_c = 1, w = 1000, U0 = 0 (free); the shell
/// radii and the sharp-barrier radius have no defaults and must be given.
model::SystemSpec build_system(const RunConfig& cfg) {
    if (cfg.system.empty()) {
        throw ParameterError("--system is required for this command");
    }
    const model::Kind kind = model::parse_kind(cfg.system);
    const double inf = std::numeric_limits<double>::infinity();
    model::SystemSpec sys;
    sys.kind = kind;
    switch (kind) {
        case model::Kind::CHO1D: sys.omega = 1.0; sys.x_c = inf; break;
        case model::Kind::CHO3D: sys.omega = 1.0; sys.r_c = inf; break;
        case model::Kind::CHA: sys.r_c = inf; break;
        case model::Kind::SCHA: break;
        case model::Kind::HICHA: sys.r_c = inf; sys.k = 2.0; break;
        case model::Kind::SPCHA: break;
        case model::Kind::HPCHA: sys.r_c = 1.0; sys.w = 1000.0; break;
    }
    for (const auto& [key, value] : cfg.fields) {
        model::set_system_field(sys, key, value);
    }
    return sys;
}

/// Resolve the (system, state) pair for `solve`: angular momentum comes
/// from --ell when given, otherwise from the state label.
std::pair<model::SystemSpec, model::StateSpec> build_target(const RunConfig& cfg) {
    model::SystemSpec sys = build_system(cfg);
    const model::ParsedLabel parsed = model::parse_state_label(sys.kind, cfg.state);
    if (sys.kind == model::Kind::CHO1D) {
        if (cfg.ell >= 0) {
            throw ParameterError("--ell does not apply to the 1D oscillator");
        }
        sys.validate();
    } else {
        int ell = parsed.ell >= 0 ? parsed.ell : 0;
        if (cfg.ell >= 0) {
            if (parsed.ell >= 0 && parsed.ell != cfg.ell) {
                std::ostringstream os;
                os << "--ell " << cfg.ell << " conflicts with the angular momentum of state \""
                   << cfg.state << "\"";
                throw ParameterError(os.str());
            }
            ell = cfg.ell;
        }
        sys = sys.with_ell(ell);
    }
    return {sys, model::make_state(sys, parsed.n_index)};
}

// ---------------------------------------------------------------------------
// report emission
// ---------------------------------------------------------------------------

/// JSON scalar for a double: infinities become the strings "inf"/"-inf"
/// (JSON numbers cannot carry them; nlohmann would emit null).
ordered_json json_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = cfg.command;
    if (!cfg.system.empty()) j["system"] = cfg.system;
    if (cfg.command == "solve" || cfg.command == "sweep") j["state"] = cfg.state;
    if (!cfg.table_id.empty()) j["table"] = cfg.table_id;
    if (!cfg.param.empty()) j["param"] = cfg.param;
    if (!cfg.values.empty()) {
        ordered_json values = ordered_json::array();
        for (const double v : cfg.values) values.push_back(json_number(v));
        j["values"] = values;
    }
    if (!cfg.fields.empty()) {
        ordered_json params;
        for (const auto& [key, value] : cfg.fields) params[key] = json_number(value);
        j["params"] = params;
    }
    if (cfg.ell >= 0) j["ell"] = cfg.ell;
    j["grid_n"] = cfg.grid_n;
    j["rmax"] = cfg.rmax;
    j["digits"] = cfg.digits;
    j["output"] = cfg.output;
    return j;
}

ordered_json make_document(const RunConfig& cfg, ordered_json rows, int pass, int fail,
                           int disputed) {
    ordered_json j;
    j["version"] = CONFINIUM_VERSION;
    j["command"] = cfg.command;
    j["config"] = config_json(cfg);
    j["rows"] = std::move(rows);
    ordered_json summary;
    summary["pass"] = pass;
    summary["fail"] = fail;
    summary["disputed"] = disputed;
    j["summary"] = summary;
    return j;
}

/// One JSON row holding a state's energy and every fluctuation-report field.
ordered_json state_row_json(const eigensolve::Eigenstate& state,
                            const observables::VirialReport& vr,
                            const observables::SchwartzCheck& sc) {
    ordered_json r;
    r["state"] = state.state.label;
    r["system"] = ordered_json::parse(model::system_to_json(state.system));
    r["energy"] = state.energy;
    r["energy_hartree"] = vr.energy;
    r["t"] = vr.t;
    r["v"] = vr.v;
    r["dT2"] = vr.dT2;
    r["dV2"] = vr.dV2;
    r["cross1"] = vr.cross1;
    r["cross2"] = vr.cross2;
    r["spread"] = vr.spread;
    r["t2_direct"] = vr.t2_direct;
    r["t2_via_energy"] = vr.t2_via_energy;
    r["t2_gap"] = vr.t2_gap;
    r["dH2"] = vr.dH2;
    r["schwartz_lhs"] = sc.lhs;
    r["schwartz_rhs"] = sc.rhs;
    r["identities_pass"] = identities_pass(vr);
    return r;
}

/// Header naming every fluctuation-report field (CSV contract).
const char* kStateCsvHeader =
    "energy,energy_hartree,t,v,dT2,dV2,cross1,cross2,spread,"
    "t2_direct,t2_via_energy,t2_gap,dH2,schwartz_lhs,schwartz_rhs,identities_pass";

std::string state_row_csv(const eigensolve::Eigenstate& state,
                          const observables::VirialReport& vr,
                          const observables::SchwartzCheck& sc) {
    std::ostringstream os;
    os << fmt_full(state.energy) << ',' << fmt_full(vr.energy) << ',' << fmt_full(vr.t) << ','
       << fmt_full(vr.v) << ',' << fmt_full(vr.dT2) << ',' << fmt_full(vr.dV2) << ','
       << fmt_full(vr.cross1) << ',' << fmt_full(vr.cross2) << ',' << fmt_full(vr.spread) << ','
       << fmt_full(vr.t2_direct) << ',' << fmt_full(vr.t2_via_energy) << ','
       << fmt_full(vr.t2_gap) << ',' << fmt_full(vr.dH2) << ',' << fmt_full(sc.lhs) << ','
       << fmt_full(sc.rhs) << ',' << (identities_pass(vr) ? "true" : "false");
    return os.str();
}

void print_state_text(const eigensolve::Eigenstate& state, const observables::VirialReport& vr,
                      const observables::SchwartzCheck& sc, int digits, std::ostream& os) {
    const auto line = [&](const char* label, double value) {
        os << "  " << label;
        for (std::size_t i = std::string(label).size(); i < 22; ++i) os << ' ';
        os << fmt(value, digits) << '\n';
    };
    os << state.system.describe() << "  state " << state.state.label << '\n';
    line("energy", state.energy);
    if (model::energy_scale(state.system) != 1.0) {
        line("energy (Hartree)", vr.energy);
    }
    line("<T>", vr.t);
    line("<V>", vr.v);
    line("(DT)^2", vr.dT2);
    line("(DV)^2", vr.dV2);
    line("<T><V>-<TV>", vr.cross1);
    line("<T><V>-<VT>", vr.cross2);
    line("spread", vr.spread);
    line("<T^2> direct", vr.t2_direct);
    line("<T^2> via energy", vr.t2_via_energy);
    line("<T^2> gap", vr.t2_gap);
    line("(DH)^2", vr.dH2);
    line("Schwartz lhs", sc.lhs);
    line("Schwartz rhs", sc.rhs);
    os << "  identities            " << (identities_pass(vr) ? "PASS" : "FAIL") << '\n';
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& sink) {
    auto [sys, st] = build_target(cfg);
    const auto policy = make_policy(cfg);
    const auto states = eigensolve::solve_bound_states(sys, st.n_index + 1, policy);
    const eigensolve::Eigenstate& state = states.at(static_cast<std::size_t>(st.n_index));
    const auto vr = observables::virial_report(state);
    const auto sc = observables::schwartz_check(state);
    const bool ok = identities_pass(vr);

    if (cfg.output == "json") {
        ordered_json rows = ordered_json::array();
        rows.push_back(state_row_json(state, vr, sc));
        sink << make_document(cfg, std::move(rows), ok ? 1 : 0, ok ? 0 : 1, 0).dump(2) << '\n';
    } else if (cfg.output == "csv") {
        sink << "state," << kStateCsvHeader << '\n'
             << state.state.label << ',' << state_row_csv(state, vr, sc) << '\n';
    } else {
        print_state_text(state, vr, sc, cfg.digits, sink);
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

std::string status_mark(const report::ComparisonRow& row) {
    switch (row.status) {
        case report::RefStatus::disputed: return "*";
        case report::RefStatus::literature: return row.passed ? "L" : "L!";
        case report::RefStatus::ok: break;
    }
    return row.passed ? "" : "!";
}

/// Print one table in the layout of the printed originals: one block per
/// state, parameter values as columns, the five quantities as rows.  Cells
/// show the recomputed values; markers flag disputed/literature/failing
/// references.
void print_table_text(const report::TableReport& tr, int digits, std::ostream& os) {
    std::vector<std::string> states;
    std::map<std::string, std::vector<const report::ComparisonRow*>> by_state;
    for (const auto& row : tr.rows) {
        if (by_state.find(row.state_label) == by_state.end()) states.push_back(row.state_label);
        by_state[row.state_label].push_back(&row);
    }
    os << "Table " << tr.table << '\n';
    for (const auto& state : states) {
        const auto& rows = by_state[state];
        std::vector<std::string> params;
        std::vector<std::string> quantities;
        std::map<std::pair<std::string, std::string>, const report::ComparisonRow*> cells;
        for (const auto* row : rows) {
            if (std::find(params.begin(), params.end(), row->param_list) == params.end()) {
                params.push_back(row->param_list);
            }
            if (std::find(quantities.begin(), quantities.end(), row->quantity) ==
                quantities.end()) {
                quantities.push_back(row->quantity);
            }
            cells[{row->param_list, row->quantity}] = row;
        }
        std::vector<std::size_t> widths;
        widths.reserve(params.size());
        for (const auto& p : params) {
            widths.push_back(std::max(p.size(), static_cast<std::size_t>(digits) + 9));
        }
        os << "  state " << state << '\n';
        os << "    " << cell("", 10);
        for (std::size_t c = 0; c < params.size(); ++c) os << cell(params[c], widths[c]);
        os << '\n';
        for (const auto& q : quantities) {
            os << "    " << cell(q, 10);
            for (std::size_t c = 0; c < params.size(); ++c) {
                auto it = cells.find({params[c], q});
                if (it == cells.end()) {
                    os << cell("-", widths[c]);
                } else {
                    os << cell(fmt(it->second->computed, digits) + status_mark(*it->second),
                               widths[c]);
                }
            }
            os << '\n';
        }
    }
    for (const auto& row : tr.rows) {
        if (!row.passed && row.status != report::RefStatus::disputed) {
            os << "  FAIL " << row.state_label << ' ' << row.param_list << ' ' << row.quantity
               << ": reference=" << fmt(row.reference, 12)
               << " computed=" << fmt(row.computed, 12) << " rel_err=" << fmt(row.rel_err, 3)
               << '\n';
        }
    }
    os << "  pass=" << tr.n_pass << " fail=" << tr.n_fail << " disputed=" << tr.n_disputed
       << "  -> " << (tr.all_ok() ? "OK" : "FAIL") << '\n';
}

ordered_json comparison_row_json(const report::ComparisonRow& row) {
    ordered_json r;
    r["table"] = row.table;
    r["state"] = row.state_label;
    r["params"] = row.param_list;
    r["quantity"] = row.quantity;
    r["status"] = report::status_name(row.status);
    r["reference"] = row.reference;
    r["computed"] = row.computed;
    r["abs_err"] = row.abs_err;
    r["rel_err"] = row.rel_err;
    r["tol_rel"] = row.tolerance_rel;
    r["tol_abs"] = row.tolerance_abs;
    r["passed"] = row.passed;
    return r;
}

int cmd_table(const RunConfig& cfg, std::ostream& sink) {
    std::string id = cfg.table_id;
    std::transform(id.begin(), id.end(), id.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    std::vector<std::string> ids;
    if (id == "ALL") {
        ids = report::list_tables();
    } else {
        const auto known = report::list_tables();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            std::ostringstream os;
            os << "unknown table id \"" << cfg.table_id << "\" (expected I..VII or all)";
            throw ParameterError(os.str());
        }
        ids.push_back(id);
    }

    const auto policy = make_policy(cfg);
    std::vector<report::TableReport> reports;
    reports.reserve(ids.size());
    for (const auto& table : ids) reports.push_back(report::reproduce_table(table, policy));

    int pass = 0, fail = 0, disputed = 0;
    for (const auto& tr : reports) {
        pass += tr.n_pass;
        fail += tr.n_fail;
        disputed += tr.n_disputed;
    }

    if (cfg.output == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& tr : reports) {
            for (const auto& row : tr.rows) rows.push_back(comparison_row_json(row));
        }
        sink << make_document(cfg, std::move(rows), pass, fail, disputed).dump(2) << '\n';
    } else if (cfg.output == "csv") {
        sink << "table,state,params,quantity,status,reference,computed,abs_err,rel_err,"
                "tol_rel,tol_abs,passed\n";
        for (const auto& tr : reports) {
            for (const auto& row : tr.rows) {
                sink << row.table << ',' << row.state_label << ',' << row.param_list << ','
                     << row.quantity << ',' << report::status_name(row.status) << ','
                     << fmt_full(row.reference) << ',' << fmt_full(row.computed) << ','
                     << fmt_full(row.abs_err) << ',' << fmt_full(row.rel_err) << ','
                     << fmt_full(row.tolerance_rel) << ',' << fmt_full(row.tolerance_abs) << ','
                     << (row.passed ? "true" : "false") << '\n';
            }
        }
    } else {
        sink << "marks: * disputed reference (excluded from pass/fail), L literature value, "
                "! failed comparison\n";
        for (const auto& tr : reports) print_table_text(tr, cfg.digits, sink);
        if (reports.size() > 1) {
            sink << "total: pass=" << pass << " fail=" << fail << " disputed=" << disputed
                 << "  -> " << (fail == 0 ? "OK" : "FAIL") << '\n';
        }
    }
    return fail == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const RunConfig& cfg, std::ostream& sink) {
    if (cfg.param.empty() || cfg.values.empty()) {
        throw ParameterError("sweep requires --param and --values");
    }
    const model::SystemSpec base = build_system(cfg);
    const std::string key = normalize_param_key(cfg.param);
    const auto policy = make_policy(cfg);
    const auto points = report::sweep(base, cfg.state, key, cfg.values, policy);

    int pass = 0, fail = 0;
    std::vector<observables::SchwartzCheck> checks;
    checks.reserve(points.size());
    for (const auto& p : points) {
        checks.push_back(observables::schwartz_check(p.state));
        (identities_pass(p.virial) ? pass : fail) += 1;
    }

    if (cfg.output == "json") {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < points.size(); ++i) {
            ordered_json r;
            r["param"] = key;
            r["value"] = json_number(points[i].param);
            ordered_json body = state_row_json(points[i].state, points[i].virial, checks[i]);
            for (auto it = body.begin(); it != body.end(); ++it) r[it.key()] = it.value();
            rows.push_back(std::move(r));
        }
        sink << make_document(cfg, std::move(rows), pass, fail, 0).dump(2) << '\n';
    } else if (cfg.output == "csv") {
        sink << "param,value,state," << kStateCsvHeader << '\n';
        for (std::size_t i = 0; i < points.size(); ++i) {
            sink << key << ',' << fmt_full(points[i].param) << ','
                 << points[i].state.state.label << ','
                 << state_row_csv(points[i].state, points[i].virial, checks[i]) << '\n';
        }
    } else {
        const int digits = cfg.digits;
        const std::size_t w = static_cast<std::size_t>(digits) + 9;
        sink << base.describe() << "  state " << cfg.state << "  sweep over " << key << '\n';
        sink << "  " << cell(key, 12) << cell("energy", w) << cell("(DV)^2", w) << cell("(DT)^2", w)
             << cell("cross1", w) << cell("cross2", w) << cell("(DH)^2", w) << "identities\n";
        for (const auto& p : points) {
            sink << "  " << cell(fmt(p.param, 6), 12) << cell(fmt(p.state.energy, digits), w)
                 << cell(fmt(p.virial.dV2, digits), w) << cell(fmt(p.virial.dT2, digits), w)
                 << cell(fmt(p.virial.cross1, digits), w) << cell(fmt(p.virial.cross2, digits), w)
                 << cell(fmt(p.virial.dH2, 3), w)
                 << (identities_pass(p.virial) ? "PASS" : "FAIL") << '\n';
        }
    }
    return fail == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    double computed = 0;
    double expected = 0;  ///< target value ("eq") or threshold ("max")
    double tolerance = 0;
    bool is_threshold = false;
    bool passed = false;
};

void check_eq(std::vector<CheckRow>& rows, const std::string& name, double computed,
              double expected, double tol_rel) {
    CheckRow row{name, computed, expected, tol_rel, false, false};
    row.passed = std::abs(computed - expected) <= tol_rel * std::max(1.0, std::abs(expected));
    rows.push_back(std::move(row));
}

void check_le(std::vector<CheckRow>& rows, const std::string& name, double computed,
              double threshold) {
    CheckRow row{name, computed, threshold, threshold, true, false};
    row.passed = computed <= threshold;
    rows.push_back(std::move(row));
}

/// Identity rows for one converged state.
void check_identities(std::vector<CheckRow>& rows, const std::string& name,
                      const observables::VirialReport& vr) {
    check_le(rows, name + " spread", vr.spread,
             kIdentityTolScale * std::max(1.0, std::abs(vr.dV2)));
    check_le(rows, name + " t2_gap", vr.t2_gap,
             kIdentityTolScale * std::max(1.0, std::abs(vr.t2_direct)));
    check_le(rows, name + " dH2", vr.dH2,
             kIdentityTolScale * std::max(1.0, vr.energy * vr.energy));
}

/// Locate the shooting-backend root next to the matrix energy by expanding
/// a bracket around it (clamped below the bound-state plateau).
double shoot_near(const model::SystemSpec& sys, const model::StateSpec& st, double e_matrix) {
    const double plateau = model::bound_plateau_native(sys);
    double delta = 1e-4 * std::max(1.0, std::abs(e_matrix));
    for (int round = 0; round < 12; ++round, delta *= 4.0) {
        double lo = e_matrix - delta;
        double hi = e_matrix + delta;
        if (std::isfinite(plateau)) {
            hi = std::min(hi, plateau - 1e-9 * std::max(1.0, std::abs(plateau)));
        }
        try {
            return eigensolve::shoot_energy(sys, st, lo, hi);
        } catch (const BracketError&) {
            continue;
        }
    }
    std::ostringstream os;
    os << "selftest: no shooting root near E = " << e_matrix << " for " << sys.describe();
    throw BracketError(os.str(), e_matrix - delta, e_matrix + delta, 0.0, 0.0);
}

int cmd_selftest(const RunConfig& cfg, std::ostream& sink) {
    const auto policy = make_policy(cfg);
    std::vector<CheckRow> rows;
    const double inf = std::numeric_limits<double>::infinity();

    // Free-limit anchors: 1D oscillator.
    {
        const auto sys = model::SystemSpec::cho1d(1.0, inf);
        const auto states = eigensolve::solve_bound_states(sys, 2, policy);
        const auto vr0 = observables::virial_report(states[0]);
        const auto vr1 = observables::virial_report(states[1]);
        check_eq(rows, "cho1d free n=0 energy", states[0].energy, 0.5, kAnchorTolRel);
        check_eq(rows, "cho1d free n=0 dV2", vr0.dV2, 0.125, kAnchorTolRel);
        check_eq(rows, "cho1d free n=1 energy", states[1].energy, 1.5, kAnchorTolRel);
        check_eq(rows, "cho1d free n=1 dV2", vr1.dV2, 0.375, kAnchorTolRel);
        check_identities(rows, "cho1d free n=0", vr0);
        check_identities(rows, "cho1d free n=1", vr1);
    }

    // Free-limit anchors: 3D oscillator ground state.
    {
        const auto sys = model::SystemSpec::cho3d(1.0, inf, 0);
        const auto states = eigensolve::solve_bound_states(sys, 1, policy);
        const auto vr = observables::virial_report(states[0]);
        check_eq(rows, "cho3d free 1s energy", states[0].energy, 1.5, kAnchorTolRel);
        check_eq(rows, "cho3d free 1s dV2", vr.dV2, 0.375, kAnchorTolRel);
        check_identities(rows, "cho3d free 1s", vr);
    }

    // Free-limit anchors: hydrogen 1s/2s/2p, including both <T^2> routes.
    {
        const auto sys = model::SystemSpec::cha(inf, 0);
        const auto states = eigensolve::solve_bound_states(sys, 2, policy);
        const auto vr1s = observables::virial_report(states[0]);
        const auto vr2s = observables::virial_report(states[1]);
        const auto sc = observables::schwartz_check(states[0]);
        check_eq(rows, "cha free 1s energy", states[0].energy, -0.5, kAnchorTolRel);
        check_eq(rows, "cha free 1s dV2", vr1s.dV2, 1.0, kAnchorTolRel);
        check_eq(rows, "cha free 1s t2 direct", vr1s.t2_direct, 1.25, kAnchorTolRel);
        check_eq(rows, "cha free 1s t2 via energy", vr1s.t2_via_energy, 1.25, kAnchorTolRel);
        check_eq(rows, "cha free 2s energy", states[1].energy, -0.125, kAnchorTolRel);
        check_eq(rows, "cha free 2s dV2", vr2s.dV2, 3.0 / 16.0, kAnchorTolRel);
        check_identities(rows, "cha free 1s", vr1s);
        check_identities(rows, "cha free 2s", vr2s);
        check_le(rows, "cha free 1s schwartz rhs-lhs", sc.rhs - sc.lhs,
                 1e-9 * std::max(1.0, std::abs(sc.lhs)));

        const auto sysp = model::SystemSpec::cha(inf, 1);
        const auto statesp = eigensolve::solve_bound_states(sysp, 1, policy);
        const auto vr2p = observables::virial_report(statesp[0]);
        check_eq(rows, "cha free 2p energy", statesp[0].energy, -0.125, kAnchorTolRel);
        check_eq(rows, "cha free 2p dV2", vr2p.dV2, 1.0 / 48.0, kAnchorTolRel);
        check_identities(rows, "cha free 2p", vr2p);
    }

    // Matrix vs analytic shooting on one confined case of each solvable kind.
    {
        const auto agree = [&](const model::SystemSpec& sys, const char* name) {
            const auto states = eigensolve::solve_bound_states(sys, 1, policy);
            const double via_shooting = shoot_near(sys, states[0].state, states[0].energy);
            check_eq(rows, name, states[0].energy, via_shooting, kBackendTolRel);
        };
        agree(model::SystemSpec::cho1d(1.0, 1.0), "backend agreement cho1d x_c=1 n=0");
        agree(model::SystemSpec::cho3d(1.0, 1.0, 0), "backend agreement cho3d r_c=1 1s");
        agree(model::SystemSpec::cha(1.0, 0), "backend agreement cha r_c=1 1s");
        agree(model::SystemSpec::spcha(1.0, 2.0, 0), "backend agreement spcha V0=1 r_c=2 1s");
    }

    int pass = 0, fail = 0;
    for (const auto& row : rows) (row.passed ? pass : fail) += 1;

    if (cfg.output == "json") {
        ordered_json jrows = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json r;
            r["name"] = row.name;
            r["computed"] = row.computed;
            r[row.is_threshold ? "threshold" : "expected"] = row.expected;
            if (!row.is_threshold) r["tol_rel"] = row.tolerance;
            r["passed"] = row.passed;
            jrows.push_back(std::move(r));
        }
        sink << make_document(cfg, std::move(jrows), pass, fail, 0).dump(2) << '\n';
    } else if (cfg.output == "csv") {
        sink << "name,computed,target,threshold,passed\n";
        for (const auto& row : rows) {
            sink << row.name << ',' << fmt_full(row.computed) << ','
                 << (row.is_threshold ? "" : fmt_full(row.expected)) << ','
                 << (row.is_threshold ? fmt_full(row.expected) : "") << ','
                 << (row.passed ? "true" : "false") << '\n';
        }
    } else {
        for (const auto& row : rows) {
            sink << (row.passed ? "PASS  " : "FAIL  ") << row.name << "  computed "
                 << fmt(row.computed, cfg.digits);
            if (row.is_threshold) {
                sink << "  (threshold " << fmt(row.expected, 3) << ")";
            } else {
                sink << "  (expected " << fmt(row.expected, cfg.digits) << ", rel tol "
                     << fmt(row.tolerance, 2) << ")";
            }
            sink << '\n';
        }
        sink << "selftest: pass=" << pass << " fail=" << fail << "  -> "
             << (fail == 0 ? "OK" : "FAIL") << '\n';
    }
    return fail == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"bound states and stationary-state identities of confined quantum systems"};
    app.name("confinium");
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", std::string(CONFINIUM_VERSION));
    app.set_config("--config", "",
                   "key=value config file (# comments; command-line flags win)");

    // Global options; thanks to fallthrough they may be written after the
    // subcommand name, and they are the keys a --config file may set.
    std::string omega, xc, rc, ra, rb, cage_k, v0, u0, wsteep;
    auto* o_system = app.add_option(
        "--system", cfg.system, "System kind: cho1d, cho3d, cha, scha, hicha, spcha, hpcha");
    app.add_option("--state", cfg.state, "State label: \"1s\", \"2p\", \"n=0\", ... (default 1s)");
    app.add_option("--ell", cfg.ell, "Angular momentum (default: from the state label)")
        ->check(CLI::NonNegativeNumber);
    auto* o_omega = app.add_option("--omega", omega, "Oscillator frequency (default 1)");
    auto* o_xc = app.add_option("--xc", xc, "Half-width of the 1D box; \"inf\" = free");
    auto* o_rc = app.add_option("--rc", rc, "Confinement radius; \"inf\" = free where allowed");
    auto* o_ra = app.add_option("--ra", ra, "Inner shell radius (scha)");
    auto* o_rb = app.add_option("--rb", rb, "Outer shell radius (scha)");
    auto* o_k = app.add_option("--k", cage_k, "Cage exponent > 1 (hicha, default 2)");
    auto* o_v0 = app.add_option("--v0", v0, "Step height in doubled units (spcha); \"inf\" = hard");
    auto* o_u0 = app.add_option("--u0", u0, "Barrier height in Hartree (hpcha)");
    auto* o_w = app.add_option("--w", wsteep, "Barrier steepness (hpcha, default 1000)");
    app.add_option("--grid-n", cfg.grid_n,
                   "Polynomial degree per element (default 256; env CONFINIUM_GRID_N)")
        ->envname("CONFINIUM_GRID_N")
        ->check(CLI::PositiveNumber);
    app.add_option("--rmax", cfg.rmax, "Initial truncation radius for decaying tails")
        ->check(CLI::PositiveNumber);
    app.add_option("--digits", cfg.digits, "Significant digits in text output (default 10)")
        ->check(CLI::Range(1, 17));
    app.add_option("--output", cfg.output, "Report format: text, json, csv (default text)")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", cfg.out_path, "Write the report to this file instead of stdout");

    auto* sub_solve =
        app.add_subcommand("solve", "Solve one bound state and check the identities on it");
    auto* sub_table =
        app.add_subcommand("table", "Recompute a reference table and compare cell by cell");
    sub_table->add_option("--id", cfg.table_id, "Table id: I..VII or \"all\"")->required();
    auto* sub_sweep = app.add_subcommand("sweep", "Solve one state across a parameter sweep");
    sub_sweep->add_option("--param", cfg.param,
                          "Swept parameter key: omega, xc, rc, ra, rb, k, v0, u0, w");
    sub_sweep
        ->add_option("--values", cfg.values,
                     "Comma-separated parameter values (use --values=... for negatives)")
        ->delimiter(',');
    auto* sub_selftest =
        app.add_subcommand("selftest", "Run the quick analytic invariant suite");
    (void)sub_solve;
    (void)sub_selftest;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        err << "error: a command is required (solve, table, sweep, selftest)\n\n" << app.help();
        return 2;
    }
    cfg.command = subs.front()->get_name();

    try {
        // Collect the system-parameter assignments (strings so that "inf"
        // parses) into canonical-key form.
        const std::pair<CLI::Option*, std::pair<const char*, const std::string*>> raw[] = {
            {o_omega, {"omega", &omega}}, {o_xc, {"x_c", &xc}}, {o_rc, {"r_c", &rc}},
            {o_ra, {"r_a", &ra}},         {o_rb, {"r_b", &rb}}, {o_k, {"k", &cage_k}},
            {o_v0, {"V0", &v0}},          {o_u0, {"U0", &u0}},  {o_w, {"w", &wsteep}},
        };
        for (const auto& [opt, kv] : raw) {
            if (opt->count() > 0) cfg.fields.emplace_back(kv.first, parse_number(*kv.second));
        }
        if (cfg.command != "table" && cfg.command != "selftest" && o_system->count() == 0) {
            throw ParameterError("--system is required for this command");
        }

        std::ofstream file;
        std::ostream* sink = &out;
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path);
            if (!file) {
                std::ostringstream os;
                os << "cannot open output file \"" << cfg.out_path << "\"";
                throw ParameterError(os.str());
            }
            sink = &file;
        }

        if (cfg.command == "solve") return cmd_solve(cfg, *sink);
        if (cfg.command == "table") return cmd_table(cfg, *sink);
        if (cfg.command == "sweep") return cmd_sweep(cfg, *sink);
        return cmd_selftest(cfg, *sink);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        if (cfg.output == "json") {
            ordered_json j;
            j["version"] = CONFINIUM_VERSION;
            j["command"] = cfg.command;
            ordered_json detail;
            detail["type"] = [&]() -> const char* {
                if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
                if (dynamic_cast<const SeriesError*>(&e)) return "series";
                if (dynamic_cast<const BracketError*>(&e)) return "bracket";
                if (dynamic_cast<const PartialResultError*>(&e)) return "partial_result";
                return "error";
            }();
            detail["message"] = e.what();
            j["error"] = detail;
            out << j.dump(2) << '\n';
        }
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace confinium::cli
