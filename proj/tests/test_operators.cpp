#include <gtest/gtest.h>

#include "lrcs/error.hpp"
#include "lrcs/operators.hpp"
#include "support.hpp"

namespace lrcs {
namespace {

using testing::random_matrix;
using testing::random_vector;

// Explicit multi-coil encoding matrix: rows are (coil, sampled cell) pairs in
// coil-major, row-major-raster order; vec(F1·X·F2ᵀ) = (F2 ⊗ F1)·vec(X).
ComplexMatrix encoding_matrix(const FrameMask& mask, const CoilMaps& coils) {
    const Index n1 = mask.n1(), n2 = mask.n2(), n = n1 * n2;
    const ComplexMatrix f1 = testing::dft_matrix(n1), f2 = testing::dft_matrix(n2);
    ComplexMatrix f(n, n);
    for (Index b = 0; b < n2; ++b)
        for (Index a = 0; a < n2; ++a) f.block(b * n1, a * n1, n1, n1) = f2(b, a) * f1;

    std::vector<Index> rows;
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j)
            if (mask.at(i, j)) rows.push_back(i + j * n1);

    ComplexMatrix a(static_cast<Index>(rows.size()) * coils.coils(), n);
    Index out = 0;
    for (const auto& d : coils.maps) {
        const ComplexVector dv = Eigen::Map<const ComplexVector>(d.data(), n);
        for (Index r : rows) a.row(out++) = f.row(r).cwiseProduct(dv.transpose());
    }
    return a;
}

TEST(FourierOperator, MatchesExplicitEncodingMatrix) {
    const auto mask = std::make_shared<const FrameMask>(golden_angle_pseudo_radial(6, 5, 3, 2));
    const auto coils = std::make_shared<const CoilMaps>(synth_coil_maps(6, 5, 3, 1));
    const FrameOperator op(mask, coils);
    const ComplexMatrix a = encoding_matrix(*mask, *coils);
    ASSERT_EQ(op.m_total(), a.rows());
    EXPECT_EQ(op.m_cells(), mask->count());
    EXPECT_EQ(op.coils(), 3);

    const ComplexVector x = random_vector(30, 1);
    const ComplexVector y = random_vector(a.rows(), 2);
    EXPECT_LT(testing::max_abs(op.apply(x) - a * x), 1e-12);
    EXPECT_LT(testing::max_abs(op.adjoint(y) - a.adjoint() * y), 1e-12);
    EXPECT_LT(testing::max_abs(op.apply_columns(random_matrix(30, 2, 3)) - a * random_matrix(30, 2, 3)), 1e-12);
}

TEST(GaussianOperator, MatchesItsMatrix) {
    const OperatorSet ops = gaussian_frame_ops(12, 5, 2, 4);
    const Eigen::MatrixXd& g = ops[1].gaussian()->matrix;
    const ComplexVector x = random_vector(12, 5);
    const ComplexVector y = random_vector(5, 6);
    EXPECT_LT(testing::max_abs(ops[1].apply(x) - g.cast<Complex>() * x), 1e-12);
    EXPECT_LT(testing::max_abs(ops[1].adjoint(y) - g.transpose().cast<Complex>() * y), 1e-12);
    const ComplexMatrix u = random_matrix(12, 3, 7);
    EXPECT_LT(testing::max_abs(ops[1].apply_columns(u) - g.cast<Complex>() * u), 1e-12);
}

TEST(GaussianOperator, SeededAndFrameIndependent) {
    const OperatorSet a = gaussian_frame_ops(20, 4, 3, 9);
    const OperatorSet b = gaussian_frame_ops(20, 4, 3, 9);
    EXPECT_EQ(a[2].gaussian()->matrix, b[2].gaussian()->matrix);
    EXPECT_NE(a[0].gaussian()->matrix, a[1].gaussian()->matrix);
}

TEST(GaussianOperator, EntriesAreStandardNormal) {
    const OperatorSet ops = gaussian_frame_ops(200, 100, 1, 3);
    const Eigen::MatrixXd& g = ops[0].gaussian()->matrix;
    const double mean = g.mean();
    const double var = (g.array() - mean).square().mean();
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_LT(std::abs(var - 1.0), 0.03);
}

TEST(AdjointIdentity, HoldsForBothKinds) {
    std::vector<FrameOperator> ops = gaussian_frame_ops(64, 13, 2, 1);
    for (Index mc : {1, 4}) {
        SamplingPlan plan{SamplingScheme::UniformFourier, make_masks(8, 8, 2, {SamplingScheme::UniformFourier, 0, 0, 20}, 2),
                          synth_coil_maps(8, 8, mc, 3)};
        for (auto& op : fourier_frame_ops(plan)) ops.push_back(op);
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const ComplexVector x = random_vector(ops[i].n(), 10 + i);
        const ComplexVector y = random_vector(ops[i].m_total(), 20 + i);
        const Complex lhs = y.dot(ops[i].apply(x));  // ⟨Ax, y⟩ = yᴴAx
        const Complex rhs = ops[i].adjoint(y).dot(x);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * x.norm() * y.norm()) << "operator " << i;
    }
}

TEST(FullySampledFourier, IsAnIsometry) {
    SamplingPlan plan{SamplingScheme::UniformFourier, {FrameMask::full(6, 7)}, synth_coil_maps(6, 7, 3, 1)};
    const FrameOperator op = fourier_frame_ops(plan).front();
    const ComplexVector x = random_vector(42, 3);
    EXPECT_NEAR(op.apply(x).norm(), x.norm(), 1e-12 * x.norm());
    EXPECT_LT(testing::max_abs(op.adjoint(op.apply(x)) - x), 1e-12);
}

TEST(SequenceMaps, ApplyAndAdjointColumnwise) {
    const OperatorSet ops = gaussian_frame_ops(10, 4, 3, 2);
    const ComplexMatrix x = random_matrix(10, 3, 8);
    const MeasurementSet y = apply_seq(ops, x);
    ASSERT_EQ(y.size(), 3);
    for (Index k = 0; k < 3; ++k) EXPECT_LT(testing::max_abs(y.frames[k] - ops[k].apply(x.col(k))), 1e-15);
    const ComplexMatrix back = adjoint_seq(ops, y);
    for (Index k = 0; k < 3; ++k) EXPECT_LT(testing::max_abs(back.col(k) - ops[k].adjoint(y.frames[k])), 1e-15);
    EXPECT_EQ(y.total_count(), 12);
    EXPECT_THROW(apply_seq(ops, random_matrix(10, 2, 1)), DataError);
}

TEST(MeasurementSet, Subtraction) {
    MeasurementSet a{{random_vector(3, 1), random_vector(2, 2)}};
    const MeasurementSet b{{random_vector(3, 3), random_vector(2, 4)}};
    const MeasurementSet d = a - b;
    EXPECT_LT(testing::max_abs(d.frames[1] - (a.frames[1] - b.frames[1])), 1e-15);
    MeasurementSet wrong{{random_vector(3, 1), random_vector(4, 2)}};
    EXPECT_THROW(a -= wrong, DataError);
}

TEST(FourierFrameOps, ValidatesPlan) {
    SamplingPlan plan{SamplingScheme::PseudoRadial, make_masks(8, 8, 2, {}, 1), synth_coil_maps(8, 8, 2, 1)};
    EXPECT_NO_THROW(fourier_frame_ops(plan));

    SamplingPlan unnormalized = plan;
    unnormalized.coils.maps[0] *= 1.01;
    EXPECT_THROW(fourier_frame_ops(unnormalized), DataError);

    SamplingPlan mixed = plan;
    mixed.masks.push_back(FrameMask::full(8, 6));
    EXPECT_THROW(fourier_frame_ops(mixed), DataError);

    SamplingPlan empty = plan;
    empty.masks.clear();
    EXPECT_THROW(fourier_frame_ops(empty), ConfigError);
}

TEST(FrameOperator, RejectsWrongLengths) {
    const OperatorSet ops = gaussian_frame_ops(10, 4, 1, 2);
    EXPECT_THROW(ops[0].apply(ComplexVector::Zero(9)), DataError);
    EXPECT_THROW(ops[0].adjoint(ComplexVector::Zero(5)), DataError);
}

}  // namespace
}  // namespace lrcs
