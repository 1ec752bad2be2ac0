#include <gtest/gtest.h>

#include "lstmlrp/numerics.hpp"

using namespace lstmlrp;

TEST(Matrix, IndexingIsRowMajor) {
    Matrix m(2, 3);
    m(0, 0) = 1.0;
    m(0, 2) = 2.0;
    m(1, 1) = 3.0;
    EXPECT_EQ(m.a[0], 1.0);
    EXPECT_EQ(m.a[2], 2.0);
    EXPECT_EQ(m.a[4], 3.0);
}

TEST(Matrix, IdentityActsAsNoOp) {
    const Matrix eye = Matrix::identity(3);
    const Vector v{1.0, -2.0, 0.5};
    EXPECT_EQ(matvec(eye, v), v);
    EXPECT_EQ(matvec_transpose(eye, v), v);
}

TEST(Matvec, MatchesHandComputedProduct) {
    Matrix m(2, 3);
    m(0, 0) = 1.0; m(0, 1) = 2.0; m(0, 2) = 3.0;
    m(1, 0) = -1.0; m(1, 1) = 0.5; m(1, 2) = 4.0;
    const Vector v{2.0, 1.0, -1.0};
    const Vector y = matvec(m, v);
    ASSERT_EQ(y.size(), 2u);
    EXPECT_DOUBLE_EQ(y[0], 1.0);
    EXPECT_DOUBLE_EQ(y[1], -5.5);
}

TEST(Matvec, TransposeMatchesHandComputedProduct) {
    Matrix m(2, 3);
    m(0, 0) = 1.0; m(0, 1) = 2.0; m(0, 2) = 3.0;
    m(1, 0) = -1.0; m(1, 1) = 0.5; m(1, 2) = 4.0;
    const Vector v{1.0, 2.0};
    const Vector y = matvec_transpose(m, v);
    ASSERT_EQ(y.size(), 3u);
    EXPECT_DOUBLE_EQ(y[0], -1.0);
    EXPECT_DOUBLE_EQ(y[1], 3.0);
    EXPECT_DOUBLE_EQ(y[2], 11.0);
}

TEST(Matvec, RejectsMismatchedShapes) {
    const Matrix m(2, 3);
    EXPECT_THROW(matvec(m, Vector{1.0, 2.0}), dimension_error);
    EXPECT_THROW(matvec_transpose(m, Vector{1.0, 2.0, 3.0}), dimension_error);
    EXPECT_THROW(add(Vector{1.0}, Vector{1.0, 2.0}), dimension_error);
    EXPECT_THROW(hadamard(Vector{1.0}, Vector{1.0, 2.0}), dimension_error);
    EXPECT_THROW(dot(Vector{1.0}, Vector{1.0, 2.0}), dimension_error);
}

TEST(Elementwise, SigmAndTanhHitKnownValues) {
    const Vector y = sigm({0.0, 100.0, -100.0});
    EXPECT_DOUBLE_EQ(y[0], 0.5);
    EXPECT_GT(y[1], 1.0 - 1e-12);
    EXPECT_LT(y[2], 1e-12);
    const Vector t = lstmlrp::tanh({0.0, 1.0});
    EXPECT_DOUBLE_EQ(t[0], 0.0);
    EXPECT_DOUBLE_EQ(t[1], std::tanh(1.0));
}

TEST(Elementwise, HadamardAndConcat) {
    EXPECT_EQ(hadamard({1.0, 2.0}, {3.0, -1.0}), (Vector{3.0, -2.0}));
    EXPECT_EQ(concat({1.0}, {2.0, 3.0}), (Vector{1.0, 2.0, 3.0}));
    EXPECT_DOUBLE_EQ(sum({0.5, 0.25, -1.0}), -0.25);
}

TEST(Argmax, TiesResolveToLowestIndex) {
    EXPECT_EQ(argmax({1.0, 3.0, 3.0, 2.0}), 1);
    EXPECT_EQ(argmax({-1.0}), 0);
    EXPECT_THROW(argmax({}), dimension_error);
}

TEST(EnsureFinite, NonFiniteInputsAreCaught) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(ensure_finite(Vector{1.0, inf}, "v"), numeric_error);
    EXPECT_THROW(add({inf}, {inf}), numeric_error);  // inf - inf style blowups surface
    Matrix m(1, 1);
    m(0, 0) = std::nan("");
    EXPECT_THROW(ensure_finite(m, "m"), numeric_error);
}
