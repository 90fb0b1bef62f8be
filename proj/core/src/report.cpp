/** \file report.cpp
 *  \brief Reference-catalogue parsing, table reproduction and parameter sweeps.
 */
#include "confinium/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <string_view>

#include "confinium/errors.hpp"

namespace confinium::report {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context) {
    std::string t = trim(text);
    if (t == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    char* end = nullptr;
    double value = std::strtod(t.c_str(), &end);
    if (end == nullptr || *end != '\0' || t.empty()) {
        std::ostringstream msg;
        msg << "malformed number '" << text << "' in " << context;
        throw Error(msg.str());
    }
    return value;
}

model::Kind table_kind(const std::string& table) {
    if (table == "I") return model::Kind::CHO1D;
    if (table == "II") return model::Kind::CHO3D;
    if (table == "III") return model::Kind::CHA;
    if (table == "IV") return model::Kind::SCHA;
    if (table == "V") return model::Kind::HICHA;
    if (table == "VI") return model::Kind::SPCHA;
    if (table == "VII") return model::Kind::HPCHA;
    std::ostringstream msg;
    msg << "unknown catalogue table '" << table
        << "' (expected one of I, II, III, IV, V, VI, VII)";
    throw ParameterError(msg.str());
}

RefStatus parse_status(const std::string& text) {
    if (text == "ok") return RefStatus::ok;
    if (text == "disputed") return RefStatus::disputed;
    if (text == "literature") return RefStatus::literature;
    std::ostringstream msg;
    msg << "unknown catalogue status '" << text << "'";
    throw Error(msg.str());
}

bool known_quantity(const std::string& q) {
    return q == "energy" || q == "dV2" || q == "dT2" || q == "cross1" ||
           q == "cross2";
}

double pick_quantity(const std::string& quantity, double native_energy,
                     const observables::VirialReport& vr) {
    if (quantity == "energy") return native_energy;
    if (quantity == "dV2") return vr.dV2;
    if (quantity == "dT2") return vr.dT2;
    if (quantity == "cross1") return vr.cross1;
    if (quantity == "cross2") return vr.cross2;
    std::ostringstream msg;
    msg << "unknown catalogue quantity '" << quantity << "'";
    throw ParameterError(msg.str());
}

} // namespace

std::string status_name(RefStatus status) {
    switch (status) {
    case RefStatus::ok: return "ok";
    case RefStatus::disputed: return "disputed";
    case RefStatus::literature: return "literature";
    }
    throw Error("invalid RefStatus value");
}

std::vector<ReferenceEntry> parse_reference_csv(const std::string& csv_text) {
    std::vector<ReferenceEntry> entries;
    std::istringstream in(csv_text);
    std::string line;
    long line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (!saw_header) {
            if (line != "table,state,param_list,quantity,value,digits,status") {
                std::ostringstream msg;
                msg << "reference catalogue: unexpected header '" << line << "'";
                throw Error(msg.str());
            }
            saw_header = true;
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 7) {
            std::ostringstream msg;
            msg << "reference catalogue line " << line_no << ": expected 7 "
                << "fields, got " << fields.size();
            throw Error(msg.str());
        }
        ReferenceEntry e;
        e.table = trim(fields[0]);
        e.state_label = trim(fields[1]);
        e.param_list = trim(fields[2]);
        e.quantity = trim(fields[3]);
        if (!known_quantity(e.quantity)) {
            std::ostringstream msg;
            msg << "reference catalogue line " << line_no << ": unknown "
                << "quantity '" << e.quantity << "'";
            throw Error(msg.str());
        }
        std::ostringstream ctx;
        ctx << "reference catalogue line " << line_no;
        e.value = parse_number(fields[4], ctx.str());
        e.digits = static_cast<int>(parse_number(fields[5], ctx.str()));
        e.status = parse_status(trim(fields[6]));

        e.system.kind = table_kind(e.table);
        for (const auto& token : split(e.param_list, ';')) {
            auto eq = token.find('=');
            if (eq == std::string::npos) {
                std::ostringstream msg;
                msg << ctx.str() << ": malformed parameter token '" << token
                    << "'";
                throw Error(msg.str());
            }
            model::set_system_field(e.system, trim(token.substr(0, eq)),
                                    parse_number(token.substr(eq + 1),
                                                 ctx.str()));
        }
        auto parsed = model::parse_state_label(e.system.kind, e.state_label);
        if (parsed.ell >= 0) {
            e.system = e.system.with_ell(parsed.ell);
        }
        e.system.validate();
        e.state = model::make_state(e.system, parsed.n_index);
        if (e.state.label != e.state_label) {
            std::ostringstream msg;
            msg << ctx.str() << ": state label '" << e.state_label
                << "' does not round-trip (canonical form '" << e.state.label
                << "')";
            throw Error(msg.str());
        }
        entries.push_back(std::move(e));
    }
    if (!saw_header) {
        throw Error("reference catalogue: empty input");
    }
    return entries;
}

const std::vector<ReferenceEntry>& load_reference_data() {
    static const std::vector<ReferenceEntry> entries =
        parse_reference_csv(detail::kReferenceCsv);
    return entries;
}

std::vector<std::string> list_tables() {
    return {"I", "II", "III", "IV", "V", "VI", "VII"};
}

double tol_rel(const std::string& table, const std::string& quantity) {
    table_kind(table); // validates the id
    if (!known_quantity(quantity)) {
        std::ostringstream msg;
        msg << "unknown catalogue quantity '" << quantity << "'";
        throw ParameterError(msg.str());
    }
    const bool finite_barrier = (table == "VI" || table == "VII");
    if (quantity == "energy") {
        if (table == "I" || table == "II" || table == "III") {
            return 1e-7;
        }
        if (table == "IV" || table == "V") {
            return 1e-6;
        }
        return 1e-4; // VI, VII
    }
    return finite_barrier ? 1e-4 : 1e-6;
}

double tol_abs() { return 1e-6; }

double literature_tol_abs() { return 5e-3; }

TableReport reproduce_table(const std::string& table,
                            const model::TruncationPolicy& policy) {
    table_kind(table); // validates the id
    TableReport out;
    out.table = table;

    std::vector<const ReferenceEntry*> selected;
    for (const auto& e : load_reference_data()) {
        if (e.table == table) {
            selected.push_back(&e);
        }
    }
    if (selected.empty()) {
        std::ostringstream msg;
        msg << "reference catalogue has no entries for table '" << table << "'";
        throw Error(msg.str());
    }

    // One diagonalization per distinct (system, angular momentum) column
    // covers every state of that column; solve to the deepest index needed.
    std::map<std::string, int> need;
    std::map<std::string, model::SystemSpec> specs;
    for (const auto* e : selected) {
        const std::string key = model::system_to_json(e->system);
        auto it = need.find(key);
        const int count = e->state.n_index + 1;
        if (it == need.end()) {
            need.emplace(key, count);
            specs.emplace(key, e->system);
        } else if (count > it->second) {
            it->second = count;
        }
    }
    std::map<std::string, std::vector<eigensolve::Eigenstate>> solved;
    for (const auto& [key, count] : need) {
        solved.emplace(key, eigensolve::solve_bound_states(specs.at(key), count,
                                                    policy));
    }
    std::map<std::string, observables::VirialReport> virials;

    for (const auto* e : selected) {
        const std::string key = model::system_to_json(e->system);
        const eigensolve::Eigenstate& st = solved.at(key).at(
            static_cast<std::size_t>(e->state.n_index));

        std::ostringstream vkey;
        vkey << key << '#' << e->state.n_index;
        auto vit = virials.find(vkey.str());
        if (vit == virials.end()) {
            vit = virials.emplace(vkey.str(), observables::virial_report(st)).first;
        }
        const observables::VirialReport& vr = vit->second;

        ComparisonRow row;
        row.table = e->table;
        row.state_label = e->state_label;
        row.param_list = e->param_list;
        row.quantity = e->quantity;
        row.status = e->status;
        row.reference = e->value;
        row.computed = pick_quantity(e->quantity, st.energy, vr);
        row.abs_err = std::abs(row.computed - row.reference);
        row.rel_err = row.abs_err / std::abs(row.reference);
        if (e->status == RefStatus::literature) {
            row.tolerance_rel = 0.0;
            row.tolerance_abs = literature_tol_abs();
            row.passed = row.abs_err <= row.tolerance_abs;
        } else {
            row.tolerance_rel = tol_rel(e->table, e->quantity);
            row.tolerance_abs = tol_abs();
            row.passed = row.rel_err <= row.tolerance_rel ||
                         row.abs_err <= row.tolerance_abs;
        }
        if (e->status == RefStatus::disputed) {
            ++out.n_disputed;
        } else if (row.passed) {
            ++out.n_pass;
        } else {
            ++out.n_fail;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<SweepPoint> sweep(const model::SystemSpec& base,
                              const std::string& state_label,
                              const std::string& param,
                              const std::vector<double>& values,
                              const model::TruncationPolicy& policy) {
    if (values.empty()) {
        throw ParameterError("sweep: empty list of parameter values");
    }
    const auto parsed = model::parse_state_label(base.kind, state_label);
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double value : values) {
        model::SystemSpec sys = base;
        model::set_system_field(sys, param, value);
        if (parsed.ell >= 0) {
            sys = sys.with_ell(parsed.ell);
        }
        sys.validate();
        auto states = eigensolve::solve_bound_states(sys, parsed.n_index + 1, policy);
        SweepPoint pt;
        pt.param = value;
        pt.system = sys;
        pt.state = std::move(states.at(static_cast<std::size_t>(parsed.n_index)));
        pt.virial = observables::virial_report(pt.state);
        points.push_back(std::move(pt));
    }
    return points;
}

} // namespace confinium::report
