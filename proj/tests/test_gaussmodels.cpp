#include "mixobs/errors.hpp"
#include "mixobs/gaussian.hpp"
#include "mixobs/model.hpp"
#include "mixobs/model_config.hpp"
#include "mixobs/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace mixobs;

namespace {

// Independent subset enumeration: count k-subsets of {0..n-1} recursively.
std::uint64_t brute_force_subset_count(int n, int k) {
    if (k == 0 || k == n) return 1;
    if (k < 0 || k > n) return 0;
    return brute_force_subset_count(n - 1, k - 1) + brute_force_subset_count(n - 1, k);
}

} // namespace

TEST_CASE("log_density closed forms") {
    CHECK(log_density(normal(0, 1), 0.0) ==
          doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
    CHECK(log_density(normal(8, 2), 8.0) ==
          doctest::Approx(-0.5 * std::log(4.0 * M_PI)).epsilon(1e-12));
    // standard normal at 1: -(log(2pi)+1)/2
    CHECK(log_density(normal(0, 1), 1.0) ==
          doctest::Approx(-0.5 * (std::log(2.0 * M_PI) + 1.0)).epsilon(1e-12));
}

TEST_CASE("log_density refuses the point mass") {
    CHECK_THROWS_AS(log_density(dirac(0.0), 0.0), DegenerateError);
    CHECK_THROWS_AS(log_density(normal(3, 0), 5.0), DegenerateError);
}

TEST_CASE("distribution literals validate") {
    CHECK(dirac(2.5).is_dirac());
    CHECK_THROWS_AS(normal(0, -1), std::invalid_argument);
    CHECK_THROWS_AS(normal(0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("model invariants") {
    CHECK_THROWS_AS(AnomalyModel(1, 1, normal(0, 1), normal(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(AnomalyModel(3, 0, normal(0, 1), normal(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(AnomalyModel(3, 3, normal(0, 1), normal(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(AnomalyModel(3, 1, normal(0, 1), normal(0, 1)), std::invalid_argument);
    CHECK_NOTHROW(AnomalyModel(3, 2, normal(0, 1), normal(0, 2)));
}

TEST_CASE("enumerate_hypotheses orders singletons") {
    const auto hs = enumerate_hypotheses(3, 1);
    REQUIRE(hs.size() == 3);
    CHECK(hs[0].support == std::vector<int>{0});
    CHECK(hs[1].support == std::vector<int>{1});
    CHECK(hs[2].support == std::vector<int>{2});
    CHECK(hs[0].to_string() == "{1}");
}

TEST_CASE("enumerate_hypotheses n=7 k=1 has 7 hypotheses") {
    CHECK(enumerate_hypotheses(7, 1).size() == 7);
}

TEST_CASE("enumerate_hypotheses n=5 k=2 lexicographic") {
    const auto hs = enumerate_hypotheses(5, 2);
    REQUIRE(hs.size() == 10);
    CHECK(hs.front().support == std::vector<int>{0, 1});
    CHECK(hs.back().support == std::vector<int>{3, 4});
    for (std::size_t i = 1; i < hs.size(); ++i) CHECK(hs[i - 1].support < hs[i].support);
}

TEST_CASE("enumerate_hypotheses counts match brute force up to n=12") {
    for (int n = 2; n <= 12; ++n)
        for (int k = 1; k < n; ++k)
            CHECK(enumerate_hypotheses(n, k).size() == brute_force_subset_count(n, k));
}

TEST_CASE("enumeration cap errors loudly") {
    CHECK_THROWS_WITH_AS(enumerate_hypotheses(40, 20),
                         doctest::Contains("hypothesis space too large"), ConfigError);
}

TEST_CASE("output_distribution unit vectors pick out the right law") {
    const AnomalyModel model(4, 2, normal(0, 1), normal(3, 100));
    for (const auto& h : enumerate_hypotheses(4, 2)) {
        for (int i = 0; i < 4; ++i) {
            const Gaussian1D law = output_distribution(model, h, unit_vector(4, i));
            if (h.contains(i)) {
                CHECK(law == model.anomalous);
            } else {
                CHECK(law == model.common);
            }
        }
    }
}

TEST_CASE("output_distribution with a dirac common law") {
    const AnomalyModel model(5, 1, dirac(0.0), normal(0, 1));
    const MeasurementVector a{{0.5, -2.0, 3.0, 1.0, 4.0}};
    const Gaussian1D law = output_distribution(model, Hypothesis{{2}}, a);
    CHECK(law.mean == 0.0);
    CHECK(law.variance == doctest::Approx(9.0).epsilon(1e-15)); // only a_3^2 contributes
}

TEST_CASE("output_distribution sums independent gaussians") {
    const AnomalyModel model(3, 1, normal(8, 1), normal(0, 1));
    const Gaussian1D law = output_distribution(model, Hypothesis{{0}}, {{1.0, 1.0, 0.0}});
    CHECK(law.mean == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(law.variance == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("output_distribution scaling: mean linear, variance quadratic") {
    Rng rng(20250808);
    const AnomalyModel model(6, 2, normal(-1, 2), normal(3, 5));
    const auto hs = enumerate_hypotheses(6, 2);
    for (int rep = 0; rep < 50; ++rep) {
        MeasurementVector a;
        for (int i = 0; i < 6; ++i) a.coefficients.push_back(rng.normal());
        const Hypothesis& h = hs[rng.uniform_index(hs.size())];
        const double c = rng.normal();
        MeasurementVector scaled = a;
        for (double& x : scaled.coefficients) x *= c;
        const Gaussian1D base = output_distribution(model, h, a);
        const Gaussian1D after = output_distribution(model, h, scaled);
        CHECK(after.mean == doctest::Approx(c * base.mean).epsilon(1e-12));
        CHECK(after.variance == doctest::Approx(c * c * base.variance).epsilon(1e-12));
    }
}

TEST_CASE("hypothesis_law diagonal placement") {
    const AnomalyModel model(2, 1, normal(0, 1), normal(0, 4));
    const GaussianVec law = hypothesis_law(model, Hypothesis{{1}});
    CHECK(law.mean(0) == 0.0);
    CHECK(law.mean(1) == 0.0);
    CHECK(law.covariance(0, 0) == 1.0);
    CHECK(law.covariance(1, 1) == 4.0);
    CHECK(law.covariance(0, 1) == 0.0);
}

TEST_CASE("hypothesis_law for the 7-variable variance example") {
    const double sigma2 = 100.0;
    const AnomalyModel model(7, 1, normal(0, 1), normal(0, sigma2));
    const GaussianVec law = hypothesis_law(model, Hypothesis{{0}});
    CHECK(law.covariance(0, 0) == sigma2);
    for (int i = 1; i < 7; ++i) CHECK(law.covariance(i, i) == 1.0);
}

TEST_CASE("hypothesis_law agrees with output_distribution on 100 random triples") {
    Rng rng(7151);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_index(6));
        const int k = 1 + static_cast<int>(rng.uniform_index(n - 1));
        const AnomalyModel model(n, k, normal(rng.normal(), 0.5 + rng.uniform()),
                                 normal(rng.normal() + 2.0, 0.5 + rng.uniform()));
        const auto hs = enumerate_hypotheses(n, k);
        const Hypothesis& h = hs[rng.uniform_index(hs.size())];
        MeasurementVector a;
        for (int i = 0; i < n; ++i) a.coefficients.push_back(rng.normal());
        const GaussianVec vec = hypothesis_law(model, h);
        Eigen::VectorXd av(n);
        for (int i = 0; i < n; ++i) av(i) = a[i];
        const Gaussian1D direct = output_distribution(model, h, a);
        CHECK(av.dot(vec.mean) == doctest::Approx(direct.mean).epsilon(1e-12));
        CHECK(av.dot(vec.covariance * av) == doctest::Approx(direct.variance).epsilon(1e-12));
    }
}

TEST_CASE("GaussianVec validates symmetry and positive semidefiniteness") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(GaussianVec(Eigen::VectorXd::Zero(2), asym), std::invalid_argument);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianVec(Eigen::VectorXd::Zero(2), indefinite), std::invalid_argument);
    CHECK_NOTHROW(GaussianVec(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)));
}

TEST_CASE("model config parses the documented format") {
    const AnomalyModel model = parse_model_config_string(
        "# experiment model\nn=102\nk=1\ncommon=normal(8,1)\nanomalous=normal(0,1)\n");
    CHECK(model.n == 102);
    CHECK(model.k == 1);
    CHECK(model.common == normal(8, 1));
    CHECK(model.anomalous == normal(0, 1));
}

TEST_CASE("model config accepts dirac literals") {
    const AnomalyModel model =
        parse_model_config_string("n=5\nk=1\ncommon=dirac(0)\nanomalous=normal(0,1)\n");
    CHECK(model.common.is_dirac());
}

TEST_CASE("model config rejects malformed input") {
    CHECK_THROWS_AS(parse_model_config_string("n=5\nk=1\ncommon=normal(0,1)\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_model_config_string("n=5\nk=1\ncommon=normal(0,1)\nanomalous=cauchy(0)\n"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_model_config_string("n=5\nk=5\ncommon=normal(0,1)\nanomalous=normal(1,1)\n"),
        ConfigError);
    CHECK_THROWS_AS(parse_model_config_string(
                        "n=5\nn=6\nk=1\ncommon=normal(0,1)\nanomalous=normal(1,1)\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_model_config_string(
                        "n=5\nk=1\nbogus=1\ncommon=normal(0,1)\nanomalous=normal(1,1)\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_model_config_string(
                        "n=5.5\nk=1\ncommon=normal(0,1)\nanomalous=normal(1,1)\n"),
                    ConfigError);
}

TEST_CASE("derive_seed separates streams") {
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}
