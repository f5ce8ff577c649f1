#include <doctest.h>

#include "lcsm/sym_matrix.hpp"
#include "oracles.hpp"

using lcsm::SymMatrix;

namespace {

SymMatrix sym2(double a, double b, double c) {
    SymMatrix m(2);
    m.set(0, 0, a);
    m.set(1, 0, b);
    m.set(1, 1, c);
    return m;
}

}  // namespace

TEST_CASE("vh stacks the lower triangle column-wise") {
    const SymMatrix m = sym2(1.5, -2.0, 7.0);
    const auto v = lcsm::vh(m);
    REQUIRE(v.values.size() == 3);
    CHECK(v.values[0] == 1.5);
    CHECK(v.values[1] == -2.0);
    CHECK(v.values[2] == 7.0);

    const auto v3 = lcsm::vh(SymMatrix::identity(3));
    Eigen::VectorXd expect(6);
    expect << 1, 0, 0, 1, 0, 1;
    CHECK(v3.values == expect);
}

TEST_CASE("vh round trip") {
    lcsm::Rng rng(11);
    for (int d : {1, 2, 3, 5, 8}) {
        const SymMatrix m = oracle::random_sym(d, rng);
        const SymMatrix back = lcsm::vh_inv(lcsm::vh(m));
        CHECK((back.mat() - m.mat()).cwiseAbs().maxCoeff() == 0.0);
        const auto hv = lcsm::vh(m);
        CHECK(lcsm::vh(lcsm::vh_inv(hv)).values == hv.values);
    }
}

TEST_CASE("vh_inv examples and errors") {
    lcsm::HalfVector v{2, Eigen::Vector3d(1, 0, 1), lcsm::Weighting::kPlain};
    CHECK(lcsm::vh_inv(v).mat() == Eigen::Matrix2d::Identity());

    v.values = Eigen::Vector3d(0, 1, 0);
    const auto m = lcsm::vh_inv(v);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 0) == 1.0);
    CHECK(m(1, 1) == 0.0);

    v.values = Eigen::Vector3d(2.0, -3.0, 4.0);
    const auto g = lcsm::vh_inv(v);
    CHECK(g(0, 0) == 2.0);
    CHECK(g(1, 0) == -3.0);
    CHECK(g(1, 1) == 4.0);

    lcsm::HalfVector bad{0, Eigen::VectorXd::Zero(4), lcsm::Weighting::kPlain};
    CHECK_THROWS_AS(lcsm::vh_inv(bad), lcsm::InvalidInput);
    lcsm::HalfVector iso{2, Eigen::Vector3d(1, 0, 1), lcsm::Weighting::kIsometric};
    CHECK_THROWS_AS(lcsm::vh_inv(iso), lcsm::InvalidInput);
    lcsm::HalfVector plain{2, Eigen::Vector3d(1, 0, 1), lcsm::Weighting::kPlain};
    CHECK_THROWS_AS(lcsm::vh_iso_inv(plain), lcsm::InvalidInput);
}

TEST_CASE("vh_iso carries sqrt(2) off-diagonal weight") {
    const auto v = lcsm::vh_iso(sym2(0, 1, 0));
    CHECK(v.values[0] == 0.0);
    CHECK(v.values[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(v.values[2] == 0.0);

    const auto vi = lcsm::vh_iso(SymMatrix::identity(2));
    CHECK(vi.values == Eigen::Vector3d(1, 0, 1));
}

TEST_CASE("vh_iso isometry against the direct Frobenius sum") {
    lcsm::Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 5);
        const SymMatrix a = oracle::random_sym(d, rng);
        const SymMatrix b = oracle::random_sym(d, rng);
        const double direct = oracle::naive_inner(a.mat(), b.mat());
        const double via_iso = lcsm::vh_iso(a).values.dot(lcsm::vh_iso(b).values);
        CHECK(std::abs(direct - via_iso) <= 1e-12 * (1.0 + std::abs(direct)));
        const SymMatrix back = lcsm::vh_iso_inv(lcsm::vh_iso(a));
        CHECK((back.mat() - a.mat()).cwiseAbs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("frob_inner examples, oracle and errors") {
    const SymMatrix i2 = SymMatrix::identity(2);
    CHECK(lcsm::frob_inner(i2, i2) == 2.0);

    lcsm::Rng rng(5);
    const SymMatrix m = oracle::random_sym(4, rng);
    CHECK(lcsm::frob_inner(SymMatrix::identity(4), m) ==
          doctest::Approx(m.mat().trace()).epsilon(1e-14));

    for (int trial = 0; trial < 20; ++trial) {
        const SymMatrix a = oracle::random_sym(5, rng);
        const SymMatrix b = oracle::random_sym(5, rng);
        const double via_product = (a.mat().transpose() * b.mat()).trace();
        CHECK(std::abs(lcsm::frob_inner(a, b) - via_product) <=
              1e-12 * (1.0 + std::abs(via_product)));
    }
    CHECK_THROWS_AS(lcsm::frob_inner(i2, SymMatrix::identity(3)), lcsm::InvalidInput);
}

TEST_CASE("frob_inner bilinear and symmetric; frob_norm triangle inequality") {
    lcsm::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const SymMatrix a = oracle::random_sym(4, rng);
        const SymMatrix b = oracle::random_sym(4, rng);
        const SymMatrix c = oracle::random_sym(4, rng);
        CHECK(lcsm::frob_inner(a, b) == doctest::Approx(lcsm::frob_inner(b, a)).epsilon(1e-14));
        const SymMatrix sum = SymMatrix::from_dense(a.mat() + 2.0 * b.mat());
        CHECK(lcsm::frob_inner(sum, c) ==
              doctest::Approx(lcsm::frob_inner(a, c) + 2.0 * lcsm::frob_inner(b, c))
                  .epsilon(1e-12));
        const SymMatrix ab = SymMatrix::from_dense(a.mat() + b.mat());
        CHECK(lcsm::frob_norm(ab) <= lcsm::frob_norm(a) + lcsm::frob_norm(b) + 1e-12);
    }
}

TEST_CASE("frob_norm examples") {
    CHECK(lcsm::frob_norm(SymMatrix::identity(7)) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
    CHECK(lcsm::frob_norm(SymMatrix(4)) == 0.0);
    CHECK(lcsm::frob_norm(sym2(3, 4, 3)) == doctest::Approx(std::sqrt(50.0)).epsilon(1e-15));
}

TEST_CASE("min_eigenvalue examples and 2x2 oracle") {
    CHECK(lcsm::min_eigenvalue(SymMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-12));
    SymMatrix diag(2);
    diag.set(0, 0, 2.0);
    diag.set(1, 1, -3.0);
    CHECK(lcsm::min_eigenvalue(diag) == doctest::Approx(-3.0).epsilon(1e-12));

    lcsm::Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const SymMatrix m = oracle::random_sym(2, rng, 3.0);
        const auto [lo, hi] = oracle::eig2x2(m.mat());
        (void)hi;
        CHECK(std::abs(lcsm::min_eigenvalue(m) - lo) <= 1e-8);
    }
}

TEST_CASE("numerical_rank examples and minor-determinant oracle") {
    CHECK(lcsm::numerical_rank(SymMatrix::identity(6)) == 6);

    lcsm::Rng rng(29);
    Eigen::VectorXd u(4);
    for (int i = 0; i < 4; ++i) u[i] = rng.normal();
    const SymMatrix outer = SymMatrix::from_dense(u * u.transpose());
    CHECK(lcsm::numerical_rank(outer) == 1);
    CHECK(lcsm::numerical_rank(SymMatrix(3)) == 0);
    CHECK_THROWS_AS(lcsm::numerical_rank(outer, 0.0), lcsm::InvalidInput);

    // adjacency with a duplicated row/column pattern and a zero row
    SymMatrix adj(4);
    adj.set(1, 0, 1.0);
    adj.set(2, 0, 1.0);  // nodes 1 and 2 have identical neighborhoods
    CHECK(lcsm::numerical_rank(adj) == oracle::rank_by_minors(adj.mat(), 1e-10));

    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 3);
        SymMatrix a(d);
        for (int l = 0; l < d; ++l)
            for (int k = l + 1; k < d; ++k)
                if (rng.uniform() < 0.5) a.set(k, l, 1.0);
        CHECK(lcsm::numerical_rank(a) == oracle::rank_by_minors(a.mat(), 1e-10));
    }
}

TEST_CASE("SymMatrix validation") {
    CHECK_THROWS_AS(SymMatrix(0), lcsm::InvalidInput);
    CHECK_THROWS_AS(SymMatrix::from_dense(Eigen::MatrixXd::Zero(2, 3)), lcsm::InvalidInput);
    // from_dense mirrors the lower triangle
    Eigen::Matrix2d skew;
    skew << 1, 99, 4, 2;
    const SymMatrix m = SymMatrix::from_dense(skew);
    CHECK(m(0, 1) == 4.0);
    CHECK(m(1, 0) == 4.0);
}
