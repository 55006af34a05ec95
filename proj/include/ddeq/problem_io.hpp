#pragma once

// Problem files (JSON), text reports and solution CSV.
//
// Problem file:
//   { "N": 1, "b": ["1", "0", "1"], "k": 0,
//     "f0": [ {"interval": ["0", "2"], "coeffs": ["1"], "basis": "local"} ],
//     "f1": ["0"], "f2": ["0"],
//     "oracle": {"n_values": [32, 64, 128], "a": [ ...pieces like f0... ]} }
// Rationals are strings "p" or "p/q" (JSON integers are accepted too).

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ddeq/bvp_solver.hpp"

namespace ddeq {

struct OracleSpec {
    std::vector<int> n_values;
    std::optional<Piecewise> a;
};

struct ProblemFile {
    BVPProblem problem;
    std::optional<OracleSpec> oracle;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline Rational json_rational(const nlohmann::json& v, const std::string& field)
{
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError("field '" + field + "': " + e.what());
        }
    }
    if (v.is_number_float())
        throw ParseError("field '" + field + "': floating-point literal; write rationals as \"p/q\" strings");
    throw ParseError("field '" + field + "': expected a rational string \"p\" or \"p/q\"");
}

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key, const std::string& where)
{
    if (!obj.is_object()) throw ParseError("field '" + where + "': expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field '" + (where.empty() ? key : where + "." + key) + "'");
    return *it;
}

inline std::vector<Rational> json_rationals(const nlohmann::json& v, const std::string& field)
{
    if (!v.is_array()) throw ParseError("field '" + field + "': expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(json_rational(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

inline Piecewise json_pieces(const nlohmann::json& v, const std::string& field, int N)
{
    if (!v.is_array() || v.empty()) throw ParseError("field '" + field + "': expected a non-empty array of pieces");
    std::vector<Rational> breaks;
    std::vector<RationalPolynomial> polys;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string where = field + "[" + std::to_string(i) + "]";
        const auto iv = json_rationals(require(v[i], "interval", where), where + ".interval");
        if (iv.size() != 2 || !(iv[0] < iv[1]))
            throw ParseError("field '" + where + ".interval': expected [a, b] with a < b");
        if (breaks.empty()) {
            if (iv[0] != 0) throw ParseError("field '" + where + ".interval': first piece must start at 0");
            breaks.push_back(iv[0]);
        } else if (iv[0] != breaks.back()) {
            throw ParseError("field '" + where + ".interval': pieces must be contiguous (expected start " +
                             to_string(breaks.back()) + ")");
        }
        breaks.push_back(iv[1]);
        RationalPolynomial p(json_rationals(require(v[i], "coeffs", where), where + ".coeffs"));
        std::string basis = "local";
        if (v[i].contains("basis")) {
            if (!v[i]["basis"].is_string()) throw ParseError("field '" + where + ".basis': expected a string");
            basis = v[i]["basis"].get<std::string>();
        }
        if (basis == "global")
            p = p.shifted(iv[0]);
        else if (basis != "local")
            throw ParseError("field '" + where + ".basis': expected \"local\" or \"global\"");
        polys.push_back(std::move(p));
    }
    if (breaks.back() != Rational(N + 1))
        throw ParseError("field '" + field + "': pieces must end at N+1 = " + std::to_string(N + 1));
    std::vector<Rational> ints;
    for (int i = 1; i <= N; ++i) ints.emplace_back(i);
    return Piecewise(std::move(breaks), std::move(polys)).refined(ints);
}

inline std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline ojson rationals_json(const std::vector<Rational>& v)
{
    ojson a = ojson::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

inline ojson pieces_json(const Piecewise& f)
{
    ojson a = ojson::array();
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        ojson p;
        p["interval"] = rationals_json({f.breakpoints()[i], f.breakpoints()[i + 1]});
        const auto& q = f.pieces()[i];
        p["coeffs"] = q.is_zero() ? rationals_json({Rational(0)}) : rationals_json(q.coeffs());
        p["basis"] = "local";
        a.push_back(p);
    }
    return a;
}

} // namespace detail

constexpr const char* kProblemBegin = "--- problem ---";
constexpr const char* kProblemEnd = "--- end problem ---";

/// Parses a problem document. A solve report is accepted too: the problem
/// embedded between its markers is parsed.
inline ProblemFile parse_problem(const std::string& text)
{
    std::string body = text;
    if (const auto b = text.find(kProblemBegin); b != std::string::npos) {
        const auto start = b + std::string(kProblemBegin).size();
        const auto e = text.find(kProblemEnd, start);
        if (e == std::string::npos) throw ParseError("report: missing '" + std::string(kProblemEnd) + "'");
        body = text.substr(start, e - start);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("syntax error at " + detail::line_col(body, e.byte ? e.byte - 1 : 0) + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("problem file must be a JSON object");

    ProblemFile pf;
    const auto& jn = detail::require(j, "N", "");
    if (!jn.is_number_integer() || jn.get<long long>() < 1 || jn.get<long long>() > 64)
        throw ParseError("field 'N': expected an integer in 1..64");
    const int N = jn.get<int>();
    const auto b = detail::json_rationals(detail::require(j, "b", ""), "b");
    if (b.size() != static_cast<std::size_t>(2 * N + 1))
        throw ParseError("field 'b': expected 2N+1 = " + std::to_string(2 * N + 1) + " entries, got " +
                         std::to_string(b.size()));
    pf.problem.stencil.N = N;
    pf.problem.stencil.coeffs = b;
    try {
        pf.problem.stencil.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("field 'b': ") + e.what());
    }
    if (j.contains("k")) {
        if (!j["k"].is_number_integer() || j["k"].get<long long>() < 0 || j["k"].get<long long>() > 30)
            throw ParseError("field 'k': expected an integer in 0..30");
        pf.problem.k = j["k"].get<int>();
    }
    pf.problem.f0 = detail::json_pieces(detail::require(j, "f0", ""), "f0", N);
    if (j.contains("f1")) pf.problem.f1 = RationalPolynomial(detail::json_rationals(j["f1"], "f1"));
    if (j.contains("f2")) pf.problem.f2 = RationalPolynomial(detail::json_rationals(j["f2"], "f2"));
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        if (!o.is_object()) throw ParseError("field 'oracle': expected an object");
        OracleSpec spec;
        if (o.contains("n_values")) {
            if (!o["n_values"].is_array()) throw ParseError("field 'oracle.n_values': expected an array");
            for (std::size_t i = 0; i < o["n_values"].size(); ++i) {
                const auto& x = o["n_values"][i];
                if (!x.is_number_integer() || x.get<long long>() < 4 || x.get<long long>() > 1024)
                    throw ParseError("field 'oracle.n_values[" + std::to_string(i) +
                                     "]': expected an integer in 4..1024");
                spec.n_values.push_back(x.get<int>());
            }
        }
        if (o.contains("a")) spec.a = detail::json_pieces(o["a"], "oracle.a", N);
        pf.oracle = spec;
    }
    return pf;
}

inline ProblemFile load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

/// Canonical JSON: fixed key order, reduced rationals, local bases, f0 refined at the integers.
inline std::string serialize_problem(const ProblemFile& pf)
{
    const auto& p = pf.problem;
    detail::ojson j;
    j["N"] = p.stencil.N;
    j["b"] = detail::rationals_json(p.stencil.coeffs);
    j["k"] = p.k;
    j["f0"] = detail::pieces_json(p.f0);
    j["f1"] = detail::rationals_json(p.f1.is_zero() ? RationalVector{Rational(0)} : p.f1.coeffs());
    j["f2"] = detail::rationals_json(p.f2.is_zero() ? RationalVector{Rational(0)} : p.f2.coeffs());
    if (pf.oracle) {
        detail::ojson o;
        o["n_values"] = pf.oracle->n_values;
        if (pf.oracle->a) o["a"] = detail::pieces_json(*pf.oracle->a);
        j["oracle"] = o;
    }
    return j.dump(2);
}

inline std::string poly_to_string(const RationalPolynomial& p, const std::string& var = "s")
{
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= p.degree(); ++i) {
        Rational c = p.coeff(static_cast<std::size_t>(i));
        if (is_zero(c)) continue;
        const bool negative = c < 0;
        if (negative) c = -c;
        out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        const std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (mono.empty()) out += to_string(c);
        else out += (c == 1 ? "" : to_string(c) + "*") + mono;
    }
    return out;
}

inline std::string format_double(double x)
{
    if (x == 0) x = 0; // no negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// CSV t,v,dv,w,f0 on [0, N+1]: grid points every `step`, and at every
/// breakpoint one row per one-sided limit (left first). Endpoints get one row.
inline std::string solution_csv(const Piecewise& v, const Piecewise& w, const Piecewise& f0, double step)
{
    if (!(step > 0)) throw DomainMismatch("sample step must be positive");
    std::set<Rational> breaks;
    for (const auto* f : {&v, &w, &f0})
        for (const auto& b : f->breakpoints()) breaks.insert(b);
    const auto vd = v.convert<double>();
    const auto dvd = v.derivative().convert<double>();
    const auto wd = w.convert<double>();
    const auto fd = f0.convert<double>();
    const double a = to_double(v.start()), b = to_double(v.end());

    std::vector<std::pair<double, int>> rows; // side: -1 left, +1 right, 0 both equal
    for (const auto& x : breaks) {
        const double t = to_double(x);
        if (x == v.start()) rows.emplace_back(t, 1);
        else if (x == v.end()) rows.emplace_back(t, -1);
        else {
            rows.emplace_back(t, -1);
            rows.emplace_back(t, 1);
        }
    }
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        const double t = a + static_cast<double>(i) * step;
        bool at_break = false;
        for (const auto& x : breaks) at_break = at_break || std::abs(to_double(x) - t) < 1e-12;
        if (!at_break && t < b) rows.emplace_back(t, 0);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& p, const auto& q) {
        return p.first != q.first ? p.first < q.first : p.second < q.second;
    });

    std::ostringstream os;
    os << "t,v,dv,w,f0\n";
    for (const auto& [t, side] : rows) {
        const Side s = side < 0 ? Side::Left : Side::Right;
        os << format_double(t) << ',' << format_double(vd.value(t, 0, s)) << ','
           << format_double(dvd.value(t, 0, s)) << ',' << format_double(wd.value(t, 0, s)) << ','
           << format_double(fd.value(t, 0, s)) << '\n';
    }
    return os.str();
}

inline std::string format_jumps(const std::vector<NodeJump>& jumps)
{
    std::ostringstream os;
    for (const auto& j : jumps)
        os << "  t = " << to_string(j.node) << ", order " << j.order << ": " << to_string(j.jump) << "\n";
    return os.str();
}

/// Human-readable solve report; the canonical problem is embedded at the end.
inline std::string solve_report(const ProblemFile& pf, const SolutionFamily& fam, double step,
                                const std::string& oracle_section = {})
{
    const auto& p = pf.problem;
    const int N = p.stencil.N;
    const int k = p.k;
    std::ostringstream os;
    auto yes = [](bool b) { return b ? "yes" : "no"; };
    os << "ddeq solve report\n";
    os << "status: " << to_string(fam.status) << "\n";
    os << "N: " << N << "\nk: " << k << "\nsample step: " << format_double(step) << "\n";
    os << "boundary data: " << (p.homogeneous() ? "homogeneous" : "non-homogeneous") << "\n";
    os << "M: " << fam.M << "\nrank M: " << fam.M_rank << "\n";
    os << "moments (F1, F2): " << to_string(fam.rhs[0]) << ", " << to_string(fam.rhs[1]) << "\n";
    if (!fam.d.empty()) os << "d1: " << to_string(fam.d[0]) << "\nd2: " << to_string(fam.d[1]) << "\n";
    os << "kernel dimension: " << fam.kernel_basis.size() << "\n";
    for (const auto& c : fam.kernel_coefficients)
        os << "  kernel element R_Q^-1(c1 t + c2), (c1, c2) = (" << to_string(c[0]) << ", " << to_string(c[1])
           << ")\n";
    os << "residuals:";
    if (fam.residuals.empty()) os << " none\n";
    else {
        os << "\n";
        for (const auto& r : fam.residuals) os << "  " << r.label << " = " << to_string(r.value) << "\n";
    }
    if (fam.particular) {
        const auto& v = *fam.particular;
        os << "solution v on (0, " << N + 1 << "), local variable s on each piece:\n";
        for (std::size_t i = 0; i < v.piece_count(); ++i)
            os << "  [" << to_string(v.breakpoints()[i]) << ", " << to_string(v.breakpoints()[i + 1])
               << "]: " << poly_to_string(v.pieces()[i]) << "\n";
        const auto& sm = fam.smoothness;
        os << "smoothness (order k+2 = " << k + 2 << "):\n";
        os << " interior jumps of v^(mu), mu = 1.." << k + 1 << ":\n" << format_jumps(sm.interior_jumps);
        if (!p.homogeneous())
            os << " end mismatches against f1, f2, mu = 0.." << k + 1 << ":\n" << format_jumps(sm.end_mismatches);
        os << " every piece in W^" << k + 2 << ": " << yes(sm.pieces_in_Wk2) << "\n";
        os << " v in W^" << k + 2 << "(0, " << N + 1 << "): " << yes(sm.global_on_Q) << "\n";
        os << " P_Q R y in W^" << k + 2 << "(0, " << N + 1 << "): " << yes(sm.image_in_Wk2) << "\n";
        os << " y in W^" << k + 2 << "(" << -N << ", " << 2 * N + 1 << "): " << yes(sm.global_on_extended) << "\n";
    }
    os << "smoothness targets:\n";
    for (const auto& t : fam.targets) {
        os << " " << t.name << ": data regular " << yes(t.rhs_regular) << ", constraints " << t.constraints
           << ", rank in (d1, d2) " << t.d_rank << ", conditions on data " << t.residual_count << ", attainable "
           << yes(t.rhs_regular && t.feasible) << "\n";
        for (const auto& r : t.residuals) os << "   " << r.label << " = " << to_string(r.value) << "\n";
    }
    os << oracle_section;
    os << kProblemBegin << "\n" << serialize_problem(pf) << "\n" << kProblemEnd << "\n";
    return os.str();
}

} // namespace ddeq
