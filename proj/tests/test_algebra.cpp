#include "doctest.h"

#include <cmath>

#include "oalab/algebra.hpp"
#include "oalab/builtin.hpp"
#include "oalab/json_io.hpp"
#include "test_helpers.hpp"

using namespace oalab;
using test::approx_equal;
using test::max_abs_diff;

TEST_CASE("adjoint is the conjugate transpose and an involution") {
    CHECK(approx_equal(adjoint(DynamicalVariable(identity(2))).matrix(), identity(2), 0.0));
    CHECK(approx_equal(adjoint(DynamicalVariable(pauli_y())).matrix(), pauli_y(), 0.0));
    CHECK(approx_equal(adjoint(DynamicalVariable(matrix_unit(2, 0, 1))).matrix(),
                       matrix_unit(2, 1, 0), 0.0));

    RandomStream rng(101);
    const Matrix u = random_ginibre(rng, 5);
    const Matrix twice = adjoint(adjoint(DynamicalVariable(u))).matrix();
    CHECK(max_abs_diff(twice, u) == 0.0);  // conjugation is exact
}

TEST_CASE("mul is the associative matrix product") {
    CHECK(approx_equal(mul(DynamicalVariable(pauli_x()), DynamicalVariable(pauli_x())).matrix(),
                       identity(2)));
    // sigma_x sigma_y = i sigma_z
    CHECK(approx_equal(mul(DynamicalVariable(pauli_x()), DynamicalVariable(pauli_y())).matrix(),
                       Complex(0, 1) * pauli_z()));

    RandomStream rng(7);
    const Matrix a = random_ginibre(rng, 3);
    CHECK(approx_equal(mul(DynamicalVariable(identity(3)), DynamicalVariable(a)).matrix(), a, 0.0));

    CHECK_THROWS_AS(mul(DynamicalVariable(identity(2)), DynamicalVariable(identity(3))),
                    DimensionMismatch);
}

TEST_CASE("jordan product: unit, anticommutator identity, symmetry") {
    CHECK(approx_equal(jordan_product(Observable(pauli_x()), Observable(pauli_y())).matrix(),
                       zero(2)));
    CHECK(approx_equal(jordan_product(Observable(pauli_z()), Observable(pauli_z())).matrix(),
                       identity(2)));

    RandomStream rng(11);
    const Observable a(random_hermitian(rng, 4));
    const Observable b(random_hermitian(rng, 4));
    CHECK(approx_equal(jordan_product(a, Observable(identity(4))).matrix(), a.matrix(), 1e-13));

    // Squares route must agree with (ab + ba) / 2.
    const Matrix anticommutator =
        0.5 * (a.matrix() * b.matrix() + b.matrix() * a.matrix());
    CHECK(max_abs_diff(jordan_product(a, b).matrix(), anticommutator) <= 1e-12);
    CHECK(approx_equal(jordan_product(a, b).matrix(), jordan_product(b, a).matrix(), 1e-12));
}

TEST_CASE("jordan product is not associative") {
    // (sigma_x o sigma_x) o sigma_y = sigma_y, but sigma_x o (sigma_x o sigma_y) = 0.
    const Observable x(pauli_x());
    const Observable y(pauli_y());
    const Matrix left = jordan_product(jordan_product(x, x), y).matrix();
    const Matrix right = jordan_product(x, jordan_product(x, y)).matrix();
    CHECK(operator_norm(left - right) > 1e-6);
    CHECK(approx_equal(left, pauli_y()));
    CHECK(approx_equal(right, zero(2)));
}

TEST_CASE("spectrum: ascending real eigenvalues with multiplicity") {
    const auto z = spectrum(Observable(pauli_z()));
    REQUIRE(z.size() == 2);
    CHECK(z[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(z[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto ones = spectrum(Observable(identity(3)));
    for (double v : ones) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }

    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = -2.0;
    d(2, 2) = 0.5;
    const auto sorted = spectrum(Observable(d));
    CHECK(sorted[0] == doctest::Approx(-2.0));
    CHECK(sorted[1] == doctest::Approx(0.5));
    CHECK(sorted[2] == doctest::Approx(3.0));
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
    RandomStream rng(13);
    for (Eigen::Index n : {2, 4, 8}) {
        const Matrix h = random_hermitian(rng, n);
        const Matrix u = random_unitary(rng, n);
        const auto before = spectrum(Observable(h));
        const auto after = spectrum(Observable(u * h * u.adjoint()));
        const double scale = std::max(1.0, operator_norm(h));
        for (std::size_t k = 0; k < before.size(); ++k) {
            CHECK(std::abs(before[k] - after[k]) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("cstar_norm: largest singular value") {
    CHECK(cstar_norm(DynamicalVariable(pauli_x())) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cstar_norm(DynamicalVariable(2.0 * identity(2))) == doctest::Approx(2.0));

    // |0><1| + 3 |1><0| has singular values {3, 1}.
    const Matrix m = matrix_unit(2, 0, 1) + 3.0 * matrix_unit(2, 1, 0);
    CHECK(cstar_norm(DynamicalVariable(m)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("C* identity against an SVD oracle") {
    RandomStream rng(17);
    for (Eigen::Index n : {2, 3, 4, 8}) {
        for (int rep = 0; rep < 100; ++rep) {
            const Matrix u = random_ginibre(rng, n);
            const double norm = cstar_norm(DynamicalVariable(u));
            const double norm_product =
                cstar_norm(DynamicalVariable(Matrix(u.adjoint() * u)));
            CHECK(std::abs(norm_product - norm * norm) <= 1e-9 * norm * norm);

            Eigen::JacobiSVD<Matrix> svd(u);
            CHECK(std::abs(norm - svd.singularValues()(0)) <=
                  1e-11 * std::max(1.0, svd.singularValues()(0)));
        }
    }
}

TEST_CASE("commutes") {
    CHECK(commutes(Observable(pauli_z()), Observable(identity(2))));
    CHECK_FALSE(commutes(Observable(pauli_z()), Observable(pauli_x())));
    // ||[sigma_z, sigma_x]|| = ||2i sigma_y|| = 2, far above tolerance
    const Matrix commutator = pauli_z() * pauli_x() - pauli_x() * pauli_z();
    CHECK(operator_norm(commutator) == doctest::Approx(2.0));

    CHECK(commutes(Observable(kron(pauli_z(), identity(2))),
                   Observable(kron(identity(2), pauli_x()))));
    CHECK_THROWS_AS(commutes(Observable(pauli_z()), Observable(identity(4))),
                    DimensionMismatch);
}

TEST_CASE("hermitian_parts: decomposition and recomposition") {
    const auto [hx, ax] = hermitian_parts(DynamicalVariable(pauli_x()));
    CHECK(approx_equal(hx.matrix(), pauli_x()));
    CHECK(approx_equal(ax.matrix(), zero(2)));

    const auto [hi, ai] = hermitian_parts(DynamicalVariable(Complex(0, 1) * pauli_x()));
    CHECK(approx_equal(hi.matrix(), zero(2)));
    CHECK(approx_equal(ai.matrix(), pauli_x()));

    // |0><1| = sigma_x / 2 + i (sigma_y / 2), by the direct formulas
    // A = (u + u*)/2 and B = (u - u*)/(2i).
    const auto [a, b] = hermitian_parts(DynamicalVariable(matrix_unit(2, 0, 1)));
    CHECK(approx_equal(a.matrix(), 0.5 * pauli_x()));
    CHECK(approx_equal(b.matrix(), 0.5 * pauli_y()));

    RandomStream rng(19);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix u = random_ginibre(rng, 6);
        const auto [re, im] = hermitian_parts(DynamicalVariable(u));
        const Matrix back = re.matrix() + Complex(0, 1) * im.matrix();
        CHECK(max_abs_diff(back, u) <= 1e-15 * std::max(1.0, operator_norm(u)));
    }
}

TEST_CASE("check_hypothesis") {
    const auto zero_report = check_hypothesis(DynamicalVariable(zero(2)));
    CHECK(zero_report.square_decomposition);
    CHECK(zero_report.faithful);
    CHECK(zero_report.pass());

    // u = sigma_x + i sigma_y = 2 |0><1|; u*u = diag(0, 4) = diag(0, 2)^2.
    const Matrix u = pauli_x() + Complex(0, 1) * pauli_y();
    CHECK(approx_equal(u, 2.0 * matrix_unit(2, 0, 1)));
    const auto report = check_hypothesis(DynamicalVariable(u));
    CHECK(report.square_decomposition);
    CHECK(report.square_residual <= 1e-9 * 4.0);
    CHECK(report.faithful);

    RandomStream rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        CHECK(check_hypothesis(DynamicalVariable(random_ginibre(rng, 4))).pass());
    }
}

TEST_CASE("observable and projector invariants are enforced") {
    CHECK_THROWS_AS(Observable(matrix_unit(2, 0, 1)), NotHermitian);
    CHECK_THROWS_AS(Projector{pauli_x()}, NotAProjector);  // spectrum {-1, +1}
    Matrix half = Matrix::Zero(2, 2);
    half(0, 0) = 0.5;
    CHECK_THROWS_AS(Projector{half}, NotAProjector);  // not idempotent

    const Projector ok(matrix_unit(2, 0, 0));
    CHECK(ok.rank_trace() == doctest::Approx(1.0));
    CHECK_NOTHROW(Projector(zero(3)));
    CHECK_NOTHROW(Projector(identity(3)));

    CHECK_THROWS_AS(DynamicalVariable(Matrix::Zero(2, 3)), DimensionMismatch);
    CHECK_THROWS_AS(DynamicalVariable(Matrix::Zero(65, 65)), DimensionMismatch);
}

TEST_CASE("matrix json round trip and hermitian flag") {
    RandomStream rng(29);
    const Matrix m = random_ginibre(rng, 3);
    const Matrix back = matrix_from_json(matrix_to_json(m));
    CHECK(max_abs_diff(back, m) == 0.0);  // doubles survive JSON exactly

    const Json tagged = matrix_to_json(pauli_x(), true);
    CHECK(tagged.at("hermitian").get<bool>());
    CHECK_NOTHROW(matrix_from_json(tagged));

    Json lying = matrix_to_json(matrix_unit(2, 0, 1));
    lying["hermitian"] = true;
    CHECK_THROWS_AS(matrix_from_json(lying), NotHermitian);

    Json wrong_shape = matrix_to_json(pauli_x());
    wrong_shape["re"] = Json::array({1.0, 2.0});
    CHECK_THROWS_AS(matrix_from_json(wrong_shape), ParseError);
    CHECK_THROWS_AS(matrix_from_json(Json{{"dim", 2}}), ParseError);
}
