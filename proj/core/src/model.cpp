/** \file model.cpp
 *  \brief Implementation of system definitions, potentials, labels and
 *         solve domains.
 */
#include "confinium/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "confinium/errors.hpp"
#include "confinium/specfun.hpp"

namespace confinium::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Width, in units of r_c/w, of the thin element pair inserted around the
/// logistic barrier of the penetrable-smooth kind. 24 decay constants leave
/// the barrier at ~4e-11 of its height at the layer edges, small enough that
/// the neighbouring elements never see an unresolved feature (the operator
/// composition in the second-moment integrals differentiates the potential
/// tail twice, so the edges must be quiet to near machine precision).
constexpr double kBarrierLayerWidths = 24.0;

/// Truncated domains without a potential-driven element split get one at
/// this fraction of the truncation radius: the inner element keeps a high
/// node density where the wavefunction lives while the outer one carries
/// the decaying tail.
constexpr double kOriginSplitFraction = 0.125;

std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

/// Logistic barrier U0 / (e^{w(1 - r/r_c)} + 1), evaluated in a form that
/// never exponentiates a large positive argument (w is allowed to be ~1e3).
double logistic_barrier(double u0, double w, double r_c, double r) {
    if (u0 == 0.0 || !std::isfinite(r_c)) return 0.0;
    const double t = w * (1.0 - r / r_c);
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return u0 * e / (1.0 + e);
    }
    return u0 / (1.0 + std::exp(t));
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError("SystemSpec: " + what);
}

/// Positive, finite or infinite (confinement radii may be infinite = free).
void require_radius(double value, const char* name) {
    require(value > 0.0 && !std::isnan(value), std::string(name) + " must be positive");
}

void append_number(std::string& out, double value) {
    if (std::isinf(value)) {
        out += "\"inf\"";
        return;
    }
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    out.append(buf.data(), res.ptr);
}

}  // namespace

Kind parse_kind(const std::string& name) {
    const std::string u = to_upper(name);
    if (u == "CHO1D") return Kind::CHO1D;
    if (u == "CHO3D") return Kind::CHO3D;
    if (u == "CHA") return Kind::CHA;
    if (u == "SCHA") return Kind::SCHA;
    if (u == "HICHA") return Kind::HICHA;
    if (u == "SPCHA") return Kind::SPCHA;
    if (u == "HPCHA") return Kind::HPCHA;
    throw ParameterError("unknown system kind '" + name +
                         "' (expected CHO1D, CHO3D, CHA, SCHA, HICHA, SPCHA or HPCHA)");
}

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::CHO1D: return "CHO1D";
        case Kind::CHO3D: return "CHO3D";
        case Kind::CHA: return "CHA";
        case Kind::SCHA: return "SCHA";
        case Kind::HICHA: return "HICHA";
        case Kind::SPCHA: return "SPCHA";
        case Kind::HPCHA: return "HPCHA";
    }
    throw ParameterError("kind_name: invalid kind value");
}

SystemSpec SystemSpec::cho1d(double omega, double x_c) {
    SystemSpec s;
    s.kind = Kind::CHO1D;
    s.omega = omega;
    s.x_c = x_c;
    s.validate();
    return s;
}

SystemSpec SystemSpec::cho3d(double omega, double r_c, int ell) {
    SystemSpec s;
    s.kind = Kind::CHO3D;
    s.omega = omega;
    s.r_c = r_c;
    s.ell = ell;
    s.validate();
    return s;
}

SystemSpec SystemSpec::cha(double r_c, int ell) {
    SystemSpec s;
    s.kind = Kind::CHA;
    s.r_c = r_c;
    s.ell = ell;
    s.validate();
    return s;
}

SystemSpec SystemSpec::scha(double r_a, double r_b, int ell) {
    SystemSpec s;
    s.kind = Kind::SCHA;
    s.r_a = r_a;
    s.r_b = r_b;
    s.ell = ell;
    s.validate();
    return s;
}

SystemSpec SystemSpec::hicha(double r_c, double k, int ell) {
    SystemSpec s;
    s.kind = Kind::HICHA;
    s.r_c = r_c;
    s.k = k;
    s.ell = ell;
    s.validate();
    return s;
}

SystemSpec SystemSpec::spcha(double V0, double r_c, int ell) {
    SystemSpec s;
    s.kind = Kind::SPCHA;
    s.V0 = V0;
    s.r_c = r_c;
    s.ell = ell;
    s.validate();
    return s;
}

SystemSpec SystemSpec::hpcha(double U0, double w, double r_c, int ell) {
    SystemSpec s;
    s.kind = Kind::HPCHA;
    s.U0 = U0;
    s.w = w;
    s.r_c = r_c;
    s.ell = ell;
    s.validate();
    return s;
}

SystemSpec SystemSpec::with_ell(int new_ell) const {
    require(kind != Kind::CHO1D, "the 1D oscillator has no angular momentum");
    SystemSpec s = *this;
    s.ell = new_ell;
    s.validate();
    return s;
}

void SystemSpec::validate() const {
    if (kind != Kind::CHO1D) {
        require(ell >= 0, "ell must be >= 0");
    }
    switch (kind) {
        case Kind::CHO1D:
            require(std::isfinite(omega) && omega > 0.0, "omega must be finite and positive");
            require_radius(x_c, "x_c");
            break;
        case Kind::CHO3D:
            require(std::isfinite(omega) && omega > 0.0, "omega must be finite and positive");
            require_radius(r_c, "r_c");
            break;
        case Kind::CHA:
            require_radius(r_c, "r_c");
            break;
        case Kind::SCHA:
            require(std::isfinite(r_a) && r_a > 0.0, "r_a must be finite and positive");
            require(std::isfinite(r_b) && r_b > r_a, "r_b must be finite and exceed r_a");
            break;
        case Kind::HICHA:
            require_radius(r_c, "r_c");
            require(std::isfinite(k) && k > 1.0, "cage exponent k must be finite and > 1");
            break;
        case Kind::SPCHA:
            require(std::isfinite(r_c) && r_c > 0.0, "r_c must be finite and positive");
            require(!std::isnan(V0) && V0 >= 0.0, "V0 must be >= 0 (may be inf)");
            break;
        case Kind::HPCHA:
            require_radius(r_c, "r_c");
            require(std::isfinite(U0) && U0 >= 0.0, "U0 must be finite and >= 0");
            require(std::isfinite(w) && w > 0.0, "steepness w must be finite and positive");
            break;
    }
}

bool SystemSpec::is_free() const {
    switch (kind) {
        case Kind::CHO1D: return std::isinf(x_c);
        case Kind::CHO3D: return std::isinf(r_c);
        case Kind::CHA: return std::isinf(r_c);
        case Kind::SCHA: return false;
        case Kind::HICHA: return std::isinf(r_c);
        case Kind::SPCHA: return false;
        case Kind::HPCHA: return U0 == 0.0 || std::isinf(r_c);
    }
    return false;
}

std::string SystemSpec::describe() const {
    std::ostringstream os;
    os << kind_name(kind) << "[";
    auto num = [](double v) {
        std::string s;
        append_number(s, v);
        if (s == "\"inf\"") return std::string("inf");
        return s;
    };
    switch (kind) {
        case Kind::CHO1D:
            os << "omega=" << num(omega) << ", x_c=" << num(x_c);
            break;
        case Kind::CHO3D:
            os << "omega=" << num(omega) << ", r_c=" << num(r_c) << ", l=" << ell;
            break;
        case Kind::CHA:
            os << "r_c=" << num(r_c) << ", l=" << ell;
            break;
        case Kind::SCHA:
            os << "r_a=" << num(r_a) << ", r_b=" << num(r_b) << ", l=" << ell;
            break;
        case Kind::HICHA:
            os << "r_c=" << num(r_c) << ", k=" << num(k) << ", l=" << ell;
            break;
        case Kind::SPCHA:
            os << "V0=" << num(V0) << ", r_c=" << num(r_c) << ", l=" << ell;
            break;
        case Kind::HPCHA:
            os << "U0=" << num(U0) << ", w=" << num(w) << ", r_c=" << num(r_c) << ", l=" << ell;
            break;
    }
    os << "]";
    return os.str();
}

void set_system_field(SystemSpec& sys, const std::string& key, double value) {
    if (key == "omega") {
        sys.omega = value;
    } else if (key == "x_c") {
        sys.x_c = value;
    } else if (key == "r_c") {
        sys.r_c = value;
    } else if (key == "r_a") {
        sys.r_a = value;
    } else if (key == "r_b") {
        sys.r_b = value;
    } else if (key == "k") {
        sys.k = value;
    } else if (key == "V0") {
        sys.V0 = value;
    } else if (key == "U0") {
        sys.U0 = value;
    } else if (key == "w") {
        sys.w = value;
    } else {
        std::ostringstream msg;
        msg << "unknown system parameter '" << key
            << "' (expected omega, x_c, r_c, r_a, r_b, k, V0, U0 or w)";
        throw ParameterError(msg.str());
    }
}

std::string system_to_json(const SystemSpec& sys) {
    sys.validate();
    std::string out = "{\"kind\":\"" + kind_name(sys.kind) + "\"";
    auto field = [&out](const char* key, double value) {
        out += ",\"";
        out += key;
        out += "\":";
        append_number(out, value);
    };
    switch (sys.kind) {
        case Kind::CHO1D:
            field("omega", sys.omega);
            field("x_c", sys.x_c);
            break;
        case Kind::CHO3D:
            field("omega", sys.omega);
            field("r_c", sys.r_c);
            break;
        case Kind::CHA:
            field("r_c", sys.r_c);
            break;
        case Kind::SCHA:
            field("r_a", sys.r_a);
            field("r_b", sys.r_b);
            break;
        case Kind::HICHA:
            field("r_c", sys.r_c);
            field("k", sys.k);
            break;
        case Kind::SPCHA:
            field("r_c", sys.r_c);
            field("V0", sys.V0);
            break;
        case Kind::HPCHA:
            field("r_c", sys.r_c);
            field("U0", sys.U0);
            field("w", sys.w);
            break;
    }
    if (sys.kind != Kind::CHO1D) {
        out += ",\"ell\":" + std::to_string(sys.ell);
    }
    out += "}";
    return out;
}

double energy_scale(const SystemSpec& sys) {
    return sys.kind == Kind::SPCHA ? 2.0 : 1.0;
}

double bound_plateau_native(const SystemSpec& sys) {
    switch (sys.kind) {
        case Kind::CHO1D:
        case Kind::CHO3D:
        case Kind::SCHA:
            return kInf;
        case Kind::CHA:
        case Kind::HICHA:
            return std::isinf(sys.r_c) ? 0.0 : kInf;
        case Kind::SPCHA:
            return std::isinf(sys.V0) ? kInf : sys.V0;
        case Kind::HPCHA:
            return sys.is_free() ? 0.0 : sys.U0;
    }
    return kInf;
}

char ell_letter(int ell) {
    static constexpr char letters[] = {'s', 'p', 'd', 'f', 'g', 'h'};
    if (ell < 0 || ell >= static_cast<int>(sizeof(letters))) {
        throw ParameterError("ell_letter: no letter assigned to l = " + std::to_string(ell));
    }
    return letters[ell];
}

int ell_from_letter(char letter) {
    switch (std::tolower(static_cast<unsigned char>(letter))) {
        case 's': return 0;
        case 'p': return 1;
        case 'd': return 2;
        case 'f': return 3;
        case 'g': return 4;
        case 'h': return 5;
    }
    throw ParameterError(std::string("unknown orbital letter '") + letter + "'");
}

StateSpec make_state(const SystemSpec& sys, int n_index) {
    if (n_index < 0) throw ParameterError("make_state: n_index must be >= 0");
    StateSpec st;
    st.n_index = n_index;
    switch (sys.kind) {
        case Kind::CHO1D:
            st.parity = (n_index % 2 == 0) ? Parity::even : Parity::odd;
            st.label = "n=" + std::to_string(n_index);
            break;
        case Kind::CHO3D:
            st.label = std::to_string(n_index + 1) + ell_letter(sys.ell);
            break;
        default:
            st.label = std::to_string(n_index + sys.ell + 1) + ell_letter(sys.ell);
            break;
    }
    return st;
}

ParsedLabel parse_state_label(Kind kind, const std::string& label) {
    std::string s = label;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw ParameterError("empty state label");

    ParsedLabel out;
    if (kind == Kind::CHO1D) {
        if (s.rfind("n=", 0) != 0) {
            throw ParameterError("1D oscillator states are labeled n=<index>, got '" + label + "'");
        }
        int n = 0;
        auto res = std::from_chars(s.data() + 2, s.data() + s.size(), n);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || n < 0) {
            throw ParameterError("malformed state label '" + label + "'");
        }
        out.n_index = n;
        out.ell = -1;
        return out;
    }

    // Spectroscopic form: digits then a single orbital letter, e.g. "2p".
    std::size_t pos = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == 0 || pos + 1 != s.size()) {
        throw ParameterError("malformed state label '" + label + "' (expected e.g. \"2p\")");
    }
    int n = 0;
    std::from_chars(s.data(), s.data() + pos, n);
    const int ell = ell_from_letter(s[pos]);
    if (kind == Kind::CHO3D) {
        if (n < 1) throw ParameterError("oscillator level index must be >= 1 in '" + label + "'");
        out.n_index = n - 1;
    } else {
        if (n < ell + 1) {
            throw ParameterError("hydrogen-like label '" + label +
                                 "' is impossible (needs n >= l+1)");
        }
        out.n_index = n - ell - 1;
    }
    out.ell = ell;
    return out;
}

double interior_potential(const SystemSpec& sys, double r) {
    switch (sys.kind) {
        case Kind::CHO1D: return 0.5 * sys.omega * sys.omega * r * r;
        case Kind::CHO3D: return 0.5 * sys.omega * r * r;
        default: return -1.0 / r;
    }
}

double confining_potential(const SystemSpec& sys, double r) {
    switch (sys.kind) {
        case Kind::CHO1D:
            return std::fabs(r) >= sys.x_c ? kInf : 0.0;
        case Kind::CHO3D:
        case Kind::CHA:
            return r >= sys.r_c ? kInf : 0.0;
        case Kind::SCHA:
            return (r <= sys.r_a || r >= sys.r_b) ? kInf : 0.0;
        case Kind::HICHA:
            return std::isinf(sys.r_c) ? 0.0 : std::pow(r / sys.r_c, sys.k);
        case Kind::SPCHA:
            // Defined piecewise rather than additively; the value is the
            // native-unit total: -2/r below the step, V0 at and above it.
            return r < sys.r_c ? -2.0 / r : sys.V0;
        case Kind::HPCHA:
            return logistic_barrier(sys.U0, sys.w, sys.r_c, r);
    }
    return 0.0;
}

bool confinement_is_hard(const SystemSpec& sys) {
    switch (sys.kind) {
        case Kind::CHO1D:
        case Kind::CHO3D:
        case Kind::CHA:
        case Kind::SCHA:
            return true;
        case Kind::SPCHA:
            return std::isinf(sys.V0);
        default:
            return false;
    }
}

double total_potential_hartree(const SystemSpec& sys, double r, double branch_hint) {
    switch (sys.kind) {
        case Kind::CHO1D:
            return 0.5 * sys.omega * sys.omega * r * r;
        case Kind::CHO3D:
            return 0.5 * sys.omega * r * r;
        case Kind::CHA:
        case Kind::SCHA:
            return -1.0 / r;
        case Kind::HICHA:
            return -1.0 / r + (std::isinf(sys.r_c) ? 0.0 : std::pow(r / sys.r_c, sys.k));
        case Kind::SPCHA:
            if (branch_hint < sys.r_c) return -1.0 / r;
            return std::isinf(sys.V0) ? kInf : 0.5 * sys.V0;
        case Kind::HPCHA:
            return -1.0 / r + logistic_barrier(sys.U0, sys.w, sys.r_c, r);
    }
    return 0.0;
}

double total_potential_hartree(const SystemSpec& sys, double r) {
    return total_potential_hartree(sys, r, r);
}

double analytic_wavefunction(const SystemSpec& sys, const StateSpec& st, double energy,
                             double r) {
    switch (sys.kind) {
        case Kind::CHO1D: {
            const double z = sys.omega * r * r;
            const double gauss = std::exp(-0.5 * z);
            if (st.parity != Parity::odd) {
                return specfun::kummer_m(0.25 - energy / (2.0 * sys.omega), 0.5, z) * gauss;
            }
            return r * specfun::kummer_m(0.75 - energy / (2.0 * sys.omega), 1.5, z) * gauss;
        }
        case Kind::CHO3D: {
            // v = omega r^2 / 2 oscillates at the effective frequency sqrt(omega).
            const double om_eff = std::sqrt(sys.omega);
            const double z = om_eff * r * r;
            const double a = 0.5 * (sys.ell + 1.5 - energy / om_eff);
            return std::pow(r, sys.ell + 1) * specfun::kummer_m(a, sys.ell + 1.5, z) *
                   std::exp(-0.5 * z);
        }
        case Kind::CHA: {
            if (energy < 0.0) {
                const double kappa = std::sqrt(-2.0 * energy);
                const double z = 2.0 * kappa * r;
                return r * std::pow(z, sys.ell) *
                       specfun::kummer_m(sys.ell + 1 - 1.0 / kappa, 2.0 * (sys.ell + 1), z) *
                       std::exp(-kappa * r);
            }
            return specfun::hydrogen_regular_series(sys.ell, energy, r);
        }
        default:
            throw ParameterError("analytic_wavefunction: " + kind_name(sys.kind) +
                                 " has no closed-form solution");
    }
}

Domain solve_domain(const SystemSpec& sys, const TruncationPolicy& policy) {
    sys.validate();
    Domain dom;
    const double rmax = policy.initial_rmax;

    switch (sys.kind) {
        case Kind::CHO1D:
            if (sys.is_free()) {
                dom.lo = -rmax;
                dom.hi = rmax;
                dom.boundary = BoundaryKind::decay_truncation;
                dom.splits = {-kOriginSplitFraction * rmax, kOriginSplitFraction * rmax};
            } else {
                dom.lo = -sys.x_c;
                dom.hi = sys.x_c;
                dom.boundary = BoundaryKind::dirichlet_wall;
            }
            return dom;

        case Kind::CHO3D:
        case Kind::CHA:
            dom.lo = 0.0;
            if (sys.is_free()) {
                dom.hi = rmax;
                dom.boundary = BoundaryKind::decay_truncation;
                dom.splits = {kOriginSplitFraction * rmax};
            } else {
                dom.hi = sys.r_c;
                dom.boundary = BoundaryKind::dirichlet_wall;
            }
            return dom;

        case Kind::SCHA:
            dom.lo = sys.r_a;
            dom.hi = sys.r_b;
            dom.boundary = BoundaryKind::dirichlet_wall;
            return dom;

        case Kind::HICHA:
            // The cage potential grows without bound, so the tail always
            // decays; a hard upper wall is never physical here.
            dom.lo = 0.0;
            dom.hi = rmax;
            dom.boundary = BoundaryKind::decay_truncation;
            dom.splits = {kOriginSplitFraction * rmax};
            return dom;

        case Kind::SPCHA:
            dom.lo = 0.0;
            if (std::isinf(sys.V0)) {
                dom.hi = sys.r_c;
                dom.boundary = BoundaryKind::dirichlet_wall;
                return dom;
            }
            dom.hi = std::max(rmax, 1.5 * sys.r_c);
            dom.boundary = BoundaryKind::decay_truncation;
            dom.breakpoints = {sys.r_c};
            // Split the decay region as well: one stretched element from the
            // barrier to the (growing) truncation radius loses resolution near
            // the barrier, where the evanescent tail lives.
            dom.splits = {sys.r_c,
                          sys.r_c + kOriginSplitFraction * (dom.hi - sys.r_c)};
            return dom;

        case Kind::HPCHA: {
            dom.lo = 0.0;
            dom.hi = sys.is_free() ? rmax : std::max(rmax, 1.5 * sys.r_c);
            dom.boundary = BoundaryKind::decay_truncation;
            if (!sys.is_free()) {
                // The barrier varies on the scale r_c/w; resolve it with a
                // thin element pair when that scale is small compared to r_c.
                const double frac = kBarrierLayerWidths / sys.w;
                if (frac < 0.5) {
                    dom.splits = {sys.r_c * (1.0 - frac), sys.r_c, sys.r_c * (1.0 + frac)};
                } else {
                    dom.splits = {sys.r_c};
                }
                // Keep the decay region resolved near the barrier even when
                // the truncation radius grows (see the SPCHA case above).
                const double edge = dom.splits.back();
                if (edge < dom.hi) {
                    dom.splits.push_back(edge +
                                         kOriginSplitFraction * (dom.hi - edge));
                }
            } else {
                dom.splits = {kOriginSplitFraction * rmax};
            }
            return dom;
        }
    }
    throw ParameterError("solve_domain: invalid kind");
}

}  // namespace confinium::model
