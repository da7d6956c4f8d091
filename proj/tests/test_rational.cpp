#include <doctest.h>

#include "vortex/rational.hpp"

using namespace vortex;

namespace {

RationalMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    RationalMatrix m;
    for (const auto& r : rows) {
        RationalVector row;
        for (long v : r)
            row.emplace_back(v);
        m.push_back(std::move(row));
    }
    return m;
}

} // namespace

TEST_CASE("rational rank matches hand results") {
    CHECK(rational_rank(mat({{1, 0}, {0, 1}})) == 2);
    CHECK(rational_rank(mat({{1, 2}, {2, 4}})) == 1);
    CHECK(rational_rank(mat({{0, 0}, {0, 0}})) == 0);
    CHECK(rational_rank(mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 2);
    // rank is insensitive to scaling by huge denominators
    RationalMatrix m = mat({{1, 1}, {1, 1}});
    m[0][0] = Rational(1, 1000000007);
    CHECK(rational_rank(m) == 2);
}

TEST_CASE("nonnegative feasibility: feasible systems return certified solutions") {
    // w1 * (1,0) + w2 * (0,1) = (3,2)
    const auto w = solve_nonnegative(mat({{1, 0}, {0, 1}}), {Rational(3), Rational(2)});
    REQUIRE(w.has_value());
    CHECK((*w)[0] == Rational(3));
    CHECK((*w)[1] == Rational(2));
}

TEST_CASE("nonnegative feasibility: infeasible by sign") {
    // w * 1 = -1 has no nonnegative solution
    CHECK_FALSE(solve_nonnegative(mat({{1}}), {Rational(-1)}).has_value());
    // (1,1) and (2,2) span a ray that misses (1,2)
    CHECK_FALSE(
        solve_nonnegative(mat({{1, 2}, {1, 2}}), {Rational(1), Rational(2)}).has_value());
}

TEST_CASE("nonnegative feasibility: solution verifies exactly") {
    const RationalMatrix M = mat({{2, 1, 0, -1}, {0, 1, 3, 1}});
    const RationalVector b = {Rational(5, 3), Rational(7, 2)};
    const auto w = solve_nonnegative(M, b);
    REQUIRE(w.has_value());
    for (const auto& wi : *w)
        CHECK(wi >= 0);
    for (std::size_t r = 0; r < M.size(); ++r) {
        Rational acc = 0;
        for (std::size_t j = 0; j < w->size(); ++j)
            acc += M[r][j] * (*w)[j];
        CHECK(acc == b[r]);
    }
}

TEST_CASE("nnls fallback agrees with exact feasibility on small systems") {
    Eigen::MatrixXd M(2, 2);
    M << 1, 0, 0, 1;
    Eigen::VectorXd b(2);
    b << 3, 2;
    const Eigen::VectorXd x = nnls(M, b);
    CHECK((M * x - b).norm() < 1e-12);
    CHECK(x.minCoeff() >= 0.0);

    // infeasible sign: the nonnegative minimizer clamps to zero
    Eigen::MatrixXd M2(1, 1);
    M2 << 1;
    Eigen::VectorXd b2(1);
    b2 << -1;
    const Eigen::VectorXd x2 = nnls(M2, b2);
    CHECK(x2(0) == doctest::Approx(0.0));
    CHECK((M2 * x2 - b2).norm() == doctest::Approx(1.0));
}
