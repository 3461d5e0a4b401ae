#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "pairlearn/kernel.hpp"

#include <Eigen/Eigenvalues>

using namespace pairlearn;
using namespace pairlearn::testing;

namespace {

InputPoint pt(std::initializer_list<double> v) {
    InputPoint x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) { x[i++] = c; }
    return x;
}

std::vector<PairKernel> all_kernels() {
    return {PairKernel::rbf_concat(0.7), PairKernel::linear_concat(1.0),
            PairKernel::ranking_difference(BaseKernel::linear, 1.0, 1.0),
            PairKernel::ranking_difference(BaseKernel::rbf, 2.0)};
}

double min_eig(const Eigen::MatrixXd &G) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("kernel values on small fixtures") {
    const PairPoint z{pt({1}), pt({2})}, zp{pt({3}), pt({4})};
    CHECK(kernel_eval(PairKernel::linear_concat(5.0), z, zp) == doctest::Approx(11.0));
    CHECK(kernel_eval(PairKernel::rbf_concat(3.3), z, z) == 1.0);
    const PairPoint a{pt({1}), pt({0})}, b{pt({0}), pt({1})};
    CHECK(kernel_eval(PairKernel::ranking_difference(BaseKernel::linear, 1.0, 1.0), a, b) == doctest::Approx(-1.0));
    // exp(-gamma ||(x,x') - (u,u')||^2) written out
    const double g = 0.4;
    CHECK(kernel_eval(PairKernel::rbf_concat(g), z, zp) == doctest::Approx(std::exp(-g * (4.0 + 4.0))));
}

TEST_CASE("kernel symmetry is exact") {
    Rng rng(11);
    for (const auto &k : all_kernels()) {
        for (int t = 0; t < 50; ++t) {
            const auto z = random_pair(rng, 3, 0.5), zp = random_pair(rng, 3, 0.5);
            CHECK(kernel_eval(k, z, zp) == kernel_eval(k, zp, z));
        }
    }
}

TEST_CASE("gram matrices are PSD on random point sets") {
    Rng rng(12);
    for (const auto &k : all_kernels()) {
        for (int t = 0; t < 50; ++t) {
            const auto m = static_cast<std::size_t>(1 + rng.index(30));
            const auto A = random_pairs(rng, m, 1 + static_cast<Eigen::Index>(rng.index(3)), 0.5);
            const Eigen::MatrixXd G = gram(k, A, A);
            CHECK((G - G.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(min_eig(G) >= -1e-8 * G.trace());
        }
    }
}

TEST_CASE("linear gram on five points has no negative eigenvalues") {
    Rng rng(13);
    const auto A = random_pairs(rng, 5, 2, 0.5);
    CHECK(min_eig(gram(PairKernel::linear_concat(1.0), A, A)) >= -1e-10);
}

TEST_CASE("duplicated point makes the gram singular") {
    Rng rng(14);
    auto A = random_pairs(rng, 4, 2, 0.5);
    A.push_back(A[1]);
    const Eigen::MatrixXd G = gram(PairKernel::rbf_concat(1.0), A, A);
    CHECK(std::abs(min_eig(G)) <= 1e-12);
}

TEST_CASE("single point rbf gram is [1]") {
    Rng rng(15);
    const auto A = random_pairs(rng, 1, 2);
    const Eigen::MatrixXd G = gram(PairKernel::rbf_concat(0.5), A, A);
    CHECK(G.rows() == 1);
    CHECK(G(0, 0) == 1.0);
}

TEST_CASE("sup bound dominates sqrt k(z,z) inside the domain") {
    Rng rng(16);
    for (const auto &k : all_kernels()) {
        for (int t = 0; t < 500; ++t) {
            const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(3));
            PairPoint z = random_pair(rng, d, 1.0);
            // push to the boundary of the unit ball half of the time
            if (t % 2 == 0) {
                z.first /= z.first.norm();
                z.second = -z.first;
            }
            if (z.first.norm() > 1.0) { z.first /= z.first.norm(); }
            if (z.second.norm() > 1.0) { z.second /= z.second.norm(); }
            CHECK(kernel_eval(k, z, z) <= k.sup_bound() * k.sup_bound() * (1.0 + 1e-12));
        }
    }
    CHECK(PairKernel::rbf_concat(2.0).sup_bound() == 1.0);
}

TEST_CASE("ranking_difference is antisymmetric in each argument") {
    Rng rng(17);
    const auto k = PairKernel::ranking_difference(BaseKernel::rbf, 1.5);
    for (int t = 0; t < 20; ++t) {
        const auto z = random_pair(rng, 2), zp = random_pair(rng, 2);
        const PairPoint zs{z.second, z.first};
        CHECK(kernel_eval(k, zs, zp) == doctest::Approx(-kernel_eval(k, z, zp)).epsilon(1e-12));
    }
}

TEST_CASE("domain checks for linear kernels") {
    const auto k = PairKernel::linear_concat(1.0);
    CHECK_NOTHROW(check_domain(k, pt({0.6, 0.8})));
    CHECK_THROWS_AS(check_domain(k, pt({1.0, 1.0})), InvalidInput);
    CHECK_NOTHROW(check_domain(PairKernel::rbf_concat(1.0), pt({1e6})));
    CHECK(k.needs_domain_bound());
    CHECK_FALSE(PairKernel::rbf_concat(1.0).needs_domain_bound());
}

TEST_CASE("invalid kernel parameters and dimension mismatch") {
    CHECK_THROWS_AS(PairKernel::rbf_concat(0.0), InvalidInput);
    CHECK_THROWS_AS(PairKernel::linear_concat(-1.0), InvalidInput);
    const PairPoint z{pt({1}), pt({2})}, zp{pt({1, 2}), pt({3, 4})};
    CHECK_THROWS_AS((void)kernel_eval(PairKernel::rbf_concat(1.0), z, zp), InvalidInput);
}

TEST_CASE("kind names round-trip") {
    for (auto kind : {KernelKind::rbf_concat, KernelKind::linear_concat, KernelKind::ranking_difference}) {
        CHECK(kernel_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS((void)kernel_kind_from_string("poly"), InvalidInput);
}
