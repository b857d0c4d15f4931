#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "subflow/csv_io.hpp"
#include "subflow/errors.hpp"
#include "subflow/nelder_mead.hpp"
#include "subflow/quadrature.hpp"
#include "subflow/special_functions.hpp"
#include "subflow/tridiagonal.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace subflow;
using namespace subflow::numerics;

TEST_CASE("gamma matches reference values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-13));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(gamma_fn(0.1) == doctest::Approx(9.5135076986687318363).epsilon(1e-13));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-3.5449077018110320546).epsilon(1e-13));
    CHECK(gamma_fn(20.0) == doctest::Approx(1.21645100408832e17).epsilon(1e-12));
}

TEST_CASE("gamma functional equation") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> dist(0.1, 20.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = dist(rng);
        CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
    }
}

TEST_CASE("gamma reflection formula") {
    std::mt19937 rng(102);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double x = dist(rng);
        if (std::abs(x - std::round(x)) < 0.05)
            continue;
        const double lhs = gamma_fn(x) * gamma_fn(1.0 - x);
        const double rhs = M_PI / std::sin(M_PI * x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("gamma poles throw") {
    CHECK_THROWS_AS(gamma_fn(0.0), PoleError);
    CHECK_THROWS_AS(gamma_fn(-3.0), PoleError);
}

TEST_CASE("reciprocal gamma is entire") {
    CHECK(reciprocal_gamma(1.5) == doctest::Approx(1.1283791670955125739).epsilon(1e-13));
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK(reciprocal_gamma(-2.0) == 0.0);
    CHECK(reciprocal_gamma(-7.0) == 0.0);
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> dist(-4.0, 8.0);
    for (int i = 0; i < 300; ++i) {
        const double x = dist(rng);
        if (std::abs(x - std::round(x)) < 0.05)
            continue;
        CHECK(reciprocal_gamma(x) * gamma_fn(x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("log gamma magnitude and sign") {
    const LogGamma p = log_gamma(10.5);
    CHECK(p.sign == 1);
    CHECK(static_cast<double>(p.log_abs) ==
          doctest::Approx(std::log(gamma_fn(10.5))).epsilon(1e-13));
    CHECK(log_gamma(-0.5).sign == -1);
    CHECK(log_gamma(-1.5).sign == 1);
    CHECK(log_gamma(-2.5).sign == -1);
    CHECK(std::exp(static_cast<double>(log_gamma(-1.5).log_abs)) ==
          doctest::Approx(std::abs(gamma_fn(-1.5))).epsilon(1e-12));
}

TEST_CASE("hyp2f1 reference values") {
    CHECK(hyp2f1(1.0, 1.0, 2.0, 0.5) ==
          doctest::Approx(1.3862943611198906188).epsilon(1e-13));
    CHECK(hyp2f1(1.5, -0.5, 2.5, 0.1) ==
          doctest::Approx(0.96944231953080559105).epsilon(1e-13));
    CHECK(hyp2f1(0.3, 0.7, 1.9, 0.0) == 1.0);
}

TEST_CASE("hyp2f1 terminating polynomial works beyond the disc") {
    CHECK(hyp2f1(-2.0, 3.0, 1.0, 2.0) == doctest::Approx(13.0).epsilon(1e-14));
    CHECK_THROWS_AS(hyp2f1(0.5, 0.5, 1.5, 1.2), ValidationError);
    CHECK_THROWS_AS(hyp2f1(0.5, 0.5, -2.0, 0.3), PoleError);
}

TEST_CASE("hyp2f1 negative argument via the Pfaff transformation") {
    CHECK(hyp2f1(1.5, -0.5, 2.5, -1.2) ==
          doctest::Approx(1.3057097025272728).epsilon(1e-13));
    CHECK(hyp2f1(4.0 / 3.0, -1.0 / 3.0, 7.0 / 3.0, -1.2083333333333333) ==
          doctest::Approx(1.1859969241974245).epsilon(1e-13));
}

TEST_CASE("jacobi rule integrates the weight exactly") {
    for (const auto& [beta, gam, exact] :
         {std::tuple{1.0, 0.1, 100.0 / 11.0}, std::tuple{1.0, 0.3, 100.0 / 39.0}}) {
        const QuadratureRule rule = jacobi_rule(24, beta, gam);
        double s = 0.0;
        for (double w : rule.weights)
            s += w;
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("jacobi rule is exact for high-degree monomials") {
    const double beta = 0.5, gam = 0.7;
    const QuadratureRule rule = jacobi_rule(8, beta, gam);
    for (int pow : {7, 11, 15}) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * std::pow(rule.nodes[i], pow);
        const double exact = std::exp(std::lgamma(beta + 1.0 + pow) + std::lgamma(gam) -
                                      std::lgamma(beta + gam + 1.0 + pow));
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("weighted integration paths agree on a smooth integrand") {
    const double beta = 0.5, gam = 0.3;
    const auto f = [](double z) { return std::exp(-z); };
    QuadratureSpec fixed;
    QuadratureSpec adaptive;
    adaptive.kind = QuadratureKind::plain_adaptive;
    const double a = integrate_jacobi(f, beta, gam, fixed);
    const double b = integrate_jacobi(f, beta, gam, adaptive);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
    const double ref = oracle::integrate(
        [&](double w) { return std::pow(1.0 - std::pow(w, 1.0 / gam), beta) *
                               std::exp(-(1.0 - std::pow(w, 1.0 / gam))) / gam; },
        1e-14, 1.0, 1e-13);
    CHECK(a == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("adaptive simpson on elementary integrals") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("tridiagonal solve matches dense elimination") {
    {
        const std::vector<double> x =
            solve_tridiagonal({-1.0}, {2.0, 2.0}, {-1.0}, {1.0, 1.0});
        CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    const int n = 50;
    std::vector<double> lower(n - 1), diag(n), upper(n - 1), rhs(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = 3.0 + dist(rng);
        rhs[i] = dist(rng) - 0.5;
    }
    for (int i = 0; i < n - 1; ++i) {
        lower[i] = -dist(rng);
        upper[i] = -dist(rng);
    }
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        A[i][i] = diag[i];
        if (i > 0)
            A[i][i - 1] = lower[i - 1];
        if (i < n - 1)
            A[i][i + 1] = upper[i];
    }
    const std::vector<double> got = solve_tridiagonal(lower, diag, upper, rhs);
    const std::vector<double> want = oracle::solve_dense(A, rhs);
    for (int i = 0; i < n; ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("tridiagonal rejects bad input") {
    CHECK_THROWS_AS(solve_tridiagonal({}, {0.0}, {}, {1.0}), SingularPivotError);
    CHECK_THROWS_AS(solve_tridiagonal({1.0}, {1.0, 1.0, 1.0}, {1.0}, {1.0, 1.0}),
                    ValidationError);
}

TEST_CASE("nelder-mead minimizes rosenbrock") {
    const auto rosen = [](const std::vector<double>& v) {
        const double a = 1.0 - v[0], b = v[1] - v[0] * v[0];
        return a * a + 100.0 * b * b;
    };
    const MinimizeResult r = minimize_derivative_free(rosen, {-1.2, 1.0}, 1e-10, 20000);
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.x[1] - 1.0) < 1e-4);
}

TEST_CASE("nelder-mead minimizes a shifted quadratic in 5d") {
    const auto f = [](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double d = v[i] - 0.3 * static_cast<double>(i + 1);
            s += (i + 1) * d * d;
        }
        return s;
    };
    const MinimizeResult r =
        minimize_derivative_free(f, {0.0, 0.0, 0.0, 0.0, 0.0}, 1e-12, 20000);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(std::abs(r.x[i] - 0.3 * static_cast<double>(i + 1)) < 1e-5);
}

TEST_CASE("csv round-trip preserves doubles exactly") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "subflow_csv_roundtrip.csv";
    const std::vector<double> a = {1.0 / 3.0, 0.1, 1e300, -2.5e-17, 0.0};
    const std::vector<double> b = {2.0, -3.5, 4.25, 1e-300, 7.0};
    {
        std::ofstream out(path, std::ios::binary);
        io::write_csv(out, {{"kind", "test"}}, {"a", "b"}, {a, b});
    }
    std::vector<std::string> header;
    const auto cols = io::read_csv_columns(path.string(), &header);
    REQUIRE(header == std::vector<std::string>{"a", "b"});
    REQUIRE(cols.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(cols[0][i] == a[i]);
        CHECK(cols[1][i] == b[i]);
    }
    fs::remove(path);
}

TEST_CASE("csv reader reports malformed rows with line numbers") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "subflow_csv_bad.csv";
    {
        std::ofstream out(path, std::ios::binary);
        out << "# note=1\nx,y\n1.0,2.0\n3.0,oops\n";
    }
    try {
        io::read_csv_columns(path.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    {
        std::ofstream out(path, std::ios::binary);
        out << "x,y\n1.0\n";
    }
    CHECK_THROWS_AS(io::read_csv_columns(path.string()), ParseError);
    fs::remove(path);
}

TEST_CASE("csv writer rejects ragged columns") {
    std::ostringstream out;
    CHECK_THROWS_AS(io::write_csv(out, {}, {"a", "b"}, {{1.0}, {1.0, 2.0}}),
                    ValidationError);
    CHECK_THROWS_AS(io::write_csv(out, {}, {"a"}, {{1.0}, {2.0}}), ValidationError);
}
