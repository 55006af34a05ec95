// ddeq: analyze, solve, verify and inspect spectra of difference-differential
// boundary value problems.
//
// Exit codes: 0 ok, 1 parse or input error, 2 stencil outside the handled
// regime, 3 infeasible problem, 4 verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ddeq/acceptance.hpp"
#include "ddeq/bvp_solver.hpp"
#include "ddeq/discrete_oracle.hpp"
#include "ddeq/problem_io.hpp"

using namespace ddeq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitRegime = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerify = 4;

std::string complex_to_string(const std::complex<double>& z)
{
    std::ostringstream os;
    os.precision(12);
    os << z.real();
    if (z.imag() != 0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string vec_to_string(const RationalVector& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
    return out + ")";
}

std::string gamma_to_string(const std::map<int, Rational>& g, const char* name)
{
    std::string out;
    for (const auto& [i, c] : g) out += std::string("  ") + name + "_" + std::to_string(i) + " = " + to_string(c) + "\n";
    return out.empty() ? "  (none)\n" : out;
}

/// Prints the regime and returns the structure when it is the handled one.
std::optional<StructureReport> regime_or_notice(const Stencil& s, std::ostream& os)
{
    const auto sm = build_shift_matrix(s);
    const auto reg = classify_regime(sm);
    os << "regime: " << to_string(reg.regime) << "\n";
    os << "R1: " << sm.entries << "\n";
    os << "det R1: " << to_string(reg.det_R1) << "\ndet R2: " << to_string(reg.det_R2) << "\n";
    if (reg.regime != Regime::SingularR2) {
        os << "notice: " << kOtherRegimeNotice << "\n";
        return std::nullopt;
    }
    return analyze_structure(s);
}

int cmd_analyze(const std::string& path)
{
    const auto pf = load_problem(path);
    const auto& s = pf.problem.stencil;
    std::cout << "stencil b_-N..b_N: " << vec_to_string(s.coeffs) << "\nN: " << s.N << "\n";
    const auto core = regime_or_notice(s, std::cout);
    if (!core) return kExitRegime;
    std::cout << "m: " << core->gamma.m << "\n";
    std::cout << "gamma1:\n" << gamma_to_string(core->gamma.gamma1, "gamma1");
    std::cout << "gamma2:\n" << gamma_to_string(core->gamma.gamma2, "gamma2");
    std::cout << "alternative anchor m': " << core->alt.m_prime << "\n";
    std::cout << "gamma1':\n" << gamma_to_string(core->alt.gamma1, "gamma1'");
    std::cout << "gamma2':\n" << gamma_to_string(core->alt.gamma2, "gamma2'");
    const auto& e = core->ends;
    std::cout << "G1 first column: " << vec_to_string(e.G1_first) << "\n";
    std::cout << "G2 last column: " << vec_to_string(e.G2_last) << "\n";
    std::cout << "end columns: " << (e.dependent ? "dependent" : "independent") << "\n";
    if (e.alpha) std::cout << "alpha: (" << to_string(e.alpha->first) << ", " << to_string(e.alpha->second) << ")\n";
    if (e.l) std::cout << "l: " << *e.l << "\n";
    std::cout << "spectrum of R1:\n";
    for (const auto& z : spectrum(core->shift)) std::cout << "  " << complex_to_string(z) << "\n";
    const auto t = index_table(e, pf.problem.k);
    std::cout << "index table (k = " << t.k << "):\n";
    std::cout << "  codim Im R_Q^k: " << t.codim_RQk << "\n  codim Im A_R^k: " << t.codim_ARk
              << "\n  codim Im B_R^k: " << t.codim_BRk << "\n  ind L_B: " << t.ind_LB << "\n  ind L_A: " << t.ind_LA
              << "\n";
    const auto rep = index_report(s, pf.problem.k);
    std::cout << "checks at this instance:\n";
    for (const auto& c : rep.checks)
        std::cout << "  " << c.claim << ": expected " << c.expected << ", computed " << c.observed << " ["
                  << (c.confirmed() ? "confirmed" : "REFUTED") << "]\n";
    std::cout << "order-zero system M: " << rep.rank_case.M << ", rank " << rep.rank_case.rank
              << ", dim ker A_R " << rep.rank_case.kernel_dim << ", conditions on f0 "
              << rep.rank_case.condition_count << "\n";
    return kExitOk;
}

std::string oracle_section(const ProblemFile& pf, const SolutionFamily& fam)
{
    if (!pf.oracle || !fam.extended) return {};
    const auto& p = pf.problem;
    std::ostringstream os;
    os << "finite-difference cross-check:\n";
    std::vector<int> ns = pf.oracle->n_values;
    if (ns.empty()) ns = {32, 64, 128};
    if (!pf.oracle->a) {
        for (const auto& row : convergence_study(p.stencil, p.f0, *fam.particular, ns, p.f1, p.f2)) {
            os << "  n = " << row.n << ": max node error " << format_double(row.error);
            if (row.error < 1e-10) os << " (roundoff level)";
            else if (row.order) os << ", observed order " << format_double(*row.order);
            os << "\n";
        }
    }
    for (const int n : ns) {
        const auto e = estimate_index(assemble(p.stencil, n, pf.oracle->a).A);
        os << "  n = " << n << ": numerical kernel " << e.kernel_dim << ", cokernel " << e.cokernel_dim
           << (pf.oracle->a ? " (with a(t))" : "") << "\n";
    }
    return os.str();
}

int cmd_solve(const std::string& path, double step, const std::string& prefix)
{
    const auto pf = load_problem(path);
    const auto sm = build_shift_matrix(pf.problem.stencil);
    if (classify_regime(sm).regime != Regime::SingularR2) {
        regime_or_notice(pf.problem.stencil, std::cerr);
        return kExitRegime;
    }
    const auto fam = solve_nonhomogeneous(pf.problem);
    const auto report = solve_report(pf, fam, step, oracle_section(pf, fam));
    {
        std::ofstream out(prefix + "-report", std::ios::binary);
        out << report;
    }
    std::cout << report.substr(0, report.find(kProblemBegin));
    if (fam.status == SolutionStatus::Infeasible) {
        std::cout << "no generalized solution; see residuals above\n";
        return kExitInfeasible;
    }
    std::ofstream csv(prefix + "-solution.csv", std::ios::binary);
    csv << solution_csv(*fam.particular, *fam.w, pf.problem.f0, step);
    std::cout << "wrote " << prefix << "-report and " << prefix << "-solution.csv\n";
    return kExitOk;
}

int cmd_spectrum(const std::string& path, std::vector<int> ns)
{
    const auto pf = load_problem(path);
    const auto& s = pf.problem.stencil;
    const auto sm = build_shift_matrix(s);
    const auto reg = classify_regime(sm);
    std::cout << "regime: " << to_string(reg.regime) << "\nspectrum of R1:\n";
    for (const auto& z : spectrum(sm)) std::cout << "  " << complex_to_string(z) << "\n";
    if (ns.empty() && pf.oracle) ns = pf.oracle->n_values;
    if (ns.empty()) ns = {8, 16};
    for (const int n : ns) {
        const auto c = compare_spectrum(sm, assemble(s, n));
        std::cout << "grid n = " << n << " (" << c.grid.size() << " eigenvalues):\n";
        for (const auto& cl : c.clusters)
            std::cout << "  " << complex_to_string(cl.expected) << ": expected multiplicity " << cl.multiplicity
                      << ", found " << cl.found << ", cluster-mean deviation " << format_double(cl.mean_error)
                      << "\n";
        std::cout << "  agreement within 1e-8: " << (c.agrees() ? "yes" : "no") << "\n";
    }
    return reg.regime == Regime::SingularR2 ? kExitOk : kExitRegime;
}

int cmd_verify(const std::string& level)
{
    const auto lv = level == "full" ? acceptance::Level::Full : acceptance::Level::Fast;
    bool ok = true;
    for (const auto& r : acceptance::run(lv)) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title << " ("
                  << acceptance::detail::fmt(r.seconds) << " s)\n";
        for (const auto& d : r.details) std::cout << "       " << d << "\n";
        ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact analysis and solution of difference-differential boundary value problems"};
    app.require_subcommand(1);

    std::string file;
    double step = 0.125;
    std::string prefix = "ddeq";
    std::string level = "fast";
    std::vector<int> ns;

    auto* analyze = app.add_subcommand("analyze", "print the structure report of a problem file");
    analyze->add_option("file", file, "problem file")->required();

    auto* solve = app.add_subcommand("solve", "solve a problem file, write <prefix>-report and <prefix>-solution.csv");
    solve->add_option("file", file, "problem file or report")->required();
    solve->add_option("--samples", step, "sample step of the CSV")->check(CLI::PositiveNumber);
    solve->add_option("--out", prefix, "output prefix");

    auto* verify = app.add_subcommand("verify", "run the acceptance battery");
    verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    auto* spec = app.add_subcommand("spectrum", "compare spectra of R1 and of the grid operator");
    spec->add_option("file", file, "problem file")->required();
    spec->add_option("--n", ns, "grid subdivisions per unit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return cmd_analyze(file);
        if (*solve) return cmd_solve(file, step, prefix);
        if (*verify) return cmd_verify(level);
        if (*spec) return cmd_spectrum(file, ns);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const UnsupportedRegime& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}
