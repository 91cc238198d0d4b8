#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <starspec/sparse.hpp>

using namespace starspec;
using Catch::Matchers::WithinAbs;

TEST_CASE("triplets are canonicalized to the sorted upper triangle", "[sparse]") {
    SparseSymMatrix m(4);
    m.add(2, 1, 0.5);
    m.add(0, 0, 4.0);
    m.add(1, 2, 0.25);  // duplicate of (2,1) mirrored
    m.add(3, 0, -1.0);
    m.finalize();

    const auto& e = m.entries();
    REQUIRE(e.size() == 3);
    REQUIRE(e[0].row == 0);
    REQUIRE(e[0].col == 0);
    REQUIRE(e[0].value == 4.0);
    REQUIRE(e[1].row == 0);
    REQUIRE(e[1].col == 3);
    REQUIRE(e[1].value == -1.0);
    REQUIRE(e[2].row == 1);
    REQUIRE(e[2].col == 2);
    REQUIRE_THAT(e[2].value, WithinAbs(0.75, 1e-15));
    for (const auto& t : e)
        REQUIRE(t.row <= t.col);
}

TEST_CASE("entries cancelling to exact zero are dropped", "[sparse]") {
    SparseSymMatrix m(3);
    m.add(0, 1, 1.0);
    m.add(1, 0, -1.0);
    m.add(2, 2, 2.0);
    m.finalize();
    REQUIRE(m.entries().size() == 1);
    REQUIRE(m.entries()[0].row == 2);
}

TEST_CASE("matvec applies the symmetric completion", "[sparse]") {
    //     [ 2 -1  0 ]
    // H = [-1  3  5 ]
    //     [ 0  5  0 ]
    SparseSymMatrix m(3);
    m.add(0, 0, 2.0);
    m.add(0, 1, -1.0);
    m.add(1, 1, 3.0);
    m.add(2, 1, 5.0);
    m.finalize();

    std::vector<double> x{1.0, 2.0, 3.0};
    std::vector<double> y = m.apply(x);
    REQUIRE_THAT(y[0], WithinAbs(0.0, 1e-15));   // 2*1 - 1*2
    REQUIRE_THAT(y[1], WithinAbs(20.0, 1e-15));  // -1 + 6 + 15
    REQUIRE_THAT(y[2], WithinAbs(10.0, 1e-15));  // 5*2

    std::vector<double> wrong{1.0, 2.0};
    REQUIRE_THROWS_AS(m.apply(wrong), ShapeError);
}

TEST_CASE("dense materialization is symmetric", "[sparse]") {
    SparseSymMatrix m(3);
    m.add(0, 1, -1.0);
    m.add(1, 2, 2.5);
    m.add(0, 0, 7.0);
    m.finalize();
    auto d = m.to_dense();
    REQUIRE(d.size() == 9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(d[i * 3 + j] == d[j * 3 + i]);
    REQUIRE(d[0 * 3 + 1] == -1.0);
    REQUIRE(d[2 * 3 + 1] == 2.5);
    REQUIRE(d[0] == 7.0);
    REQUIRE(d[4] == 0.0);
}

TEST_CASE("frobenius norm counts off-diagonal entries twice", "[sparse]") {
    SparseSymMatrix m(2);
    m.add(0, 0, 3.0);
    m.add(0, 1, 4.0);
    m.finalize();
    // sqrt(9 + 2*16)
    REQUIRE_THAT(m.frobenius_norm(), WithinAbs(std::sqrt(41.0), 1e-14));
}

TEST_CASE("non-finite values are rejected at finalize", "[sparse][errors]") {
    SparseSymMatrix m(2);
    m.add(0, 1, std::numeric_limits<double>::quiet_NaN());
    REQUIRE_THROWS_AS(m.finalize(), BadMatrix);

    SparseSymMatrix inf(2);
    inf.add(0, 0, std::numeric_limits<double>::infinity());
    REQUIRE_THROWS_AS(inf.finalize(), BadMatrix);
}

TEST_CASE("lifecycle misuse is caught", "[sparse][errors]") {
    SparseSymMatrix m(3);
    REQUIRE_THROWS_AS(m.entries(), Error);
    m.add(0, 0, 1.0);
    REQUIRE_THROWS_AS(m.apply(std::vector<double>(3, 0.0)), Error);
    m.finalize();
    REQUIRE_THROWS_AS(m.add(1, 1, 1.0), Error);

    SparseSymMatrix oob(2);
    REQUIRE_THROWS_AS(oob.add(0, 2, 1.0), OutOfBounds);
}
