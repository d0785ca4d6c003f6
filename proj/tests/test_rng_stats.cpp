#include <doctest.h>

#include <cmath>

#include "confsim/estimator.hpp"
#include "confsim/rng.hpp"
#include "confsim/stats.hpp"

using namespace confsim;

TEST_CASE("philox streams are deterministic and independent") {
    Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    bool stream_differs = false, seed_differs = false;
    for (int i = 0; i < 100; ++i) {
        uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) stream_differs = true;
        if (va != d.next_u64()) seed_differs = true;
    }
    CHECK(stream_differs);
    CHECK(seed_differs);
}

TEST_CASE("uniform stays in range with sane moments") {
    Rng rng(1, 0);
    RunningStat s;
    for (int i = 0; i < 50000; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s.add(u);
    }
    CHECK(std::abs(s.mean() - 0.5) < 4 * s.std_error());
    CHECK(s.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.05));
}

TEST_CASE("normal and poisson draws have the right moments") {
    Rng rng(2, 0);
    RunningStat n;
    for (int i = 0; i < 50000; ++i) n.add(rng.normal());
    CHECK(std::abs(n.mean()) < 4 * n.std_error());
    CHECK(n.variance() == doctest::Approx(1.0).epsilon(0.05));

    RunningStat p;
    for (int i = 0; i < 30000; ++i) p.add(static_cast<double>(rng.poisson(10.0)));
    CHECK(std::abs(p.mean() - 10.0) < 4 * p.std_error());
    CHECK(p.variance() == doctest::Approx(10.0).epsilon(0.1));

    // chunked regime (lambda > 60)
    RunningStat big;
    for (int i = 0; i < 5000; ++i) big.add(static_cast<double>(rng.poisson(150.0)));
    CHECK(std::abs(big.mean() - 150.0) < 4 * big.std_error());

    CHECK(rng.poisson(0.0) == 0);
    CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
}

TEST_CASE("uniform_index covers the range") {
    Rng rng(3, 0);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_index(7)];
    for (int h : hits) CHECK(h > 800);
    CHECK_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
}

TEST_CASE("running stat matches direct formulas and merges exactly") {
    Rng rng(4, 0);
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(rng.uniform(-2, 5));

    RunningStat whole;
    for (double x : xs) whole.add(x);

    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    CHECK(whole.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(whole.variance() == doctest::Approx(var).epsilon(1e-12));

    RunningStat first, second;
    for (size_t i = 0; i < xs.size(); ++i) (i < 400 ? first : second).add(xs[i]);
    first.merge(second);
    CHECK(first.mean() == doctest::Approx(whole.mean()).epsilon(1e-13));
    CHECK(first.variance() == doctest::Approx(whole.variance()).epsilon(1e-13));
}

TEST_CASE("aggregate: single result, equal precision pair, shards vs whole") {
    EstimatorResult single{1000, 2.5, 0.1, 7.0};
    auto same = aggregate({single});
    CHECK(same.mean == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(same.std_error == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(same.target == 7.0);

    // equal precision, equal means: arithmetic mean and error / sqrt(2)
    EstimatorResult a{500, 3.0, 0.2, std::nullopt}, b{500, 3.0, 0.2, std::nullopt};
    auto pooled = aggregate({a, b});
    CHECK(pooled.mean == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(pooled.std_error == doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(1e-12));

    // pooling 10 shards of one run reproduces the unsharded result
    Rng rng(5, 0);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(rng.normal() * 3.0 + 1.0);
    RunningStat whole;
    std::vector<EstimatorResult> shards;
    for (int s = 0; s < 10; ++s) {
        RunningStat part;
        for (int i = s * 1000; i < (s + 1) * 1000; ++i) {
            part.add(xs[static_cast<size_t>(i)]);
            whole.add(xs[static_cast<size_t>(i)]);
        }
        shards.push_back(EstimatorResult::from(part));
    }
    auto merged = aggregate(shards);
    CHECK(merged.mean == doctest::Approx(whole.mean()).epsilon(1e-12));
    CHECK(merged.std_error == doctest::Approx(whole.std_error()).epsilon(1e-12));
    CHECK(merged.n_samples == 10000);

    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
    EstimatorResult other_target{10, 0.0, 1.0, 3.0};
    CHECK_THROWS_AS(aggregate({single, other_target}), std::invalid_argument);
}

TEST_CASE("z-scores") {
    EstimatorResult r{100, 1.5, 0.25, 1.0};
    CHECK(r.z_score() == doctest::Approx(2.0));
    EstimatorResult a{100, 1.0, 0.3, std::nullopt}, b{100, 0.0, 0.4, std::nullopt};
    CHECK(z_difference(a, b) == doctest::Approx(1.0 / 0.5));
}

TEST_CASE("normal cdf and incomplete gamma") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
    CHECK(normal_cdf(-1.959963985) == doctest::Approx(0.025).epsilon(1e-6));

    // chi-square survival: df=1 at 3.841 is ~0.05; df=5 at 11.07 is ~0.05
    CHECK(gamma_q(0.5, 0.5 * 3.841459) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(gamma_q(2.5, 0.5 * 11.0705) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(gamma_q(1.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("poisson pmf sums to one") {
    double total = 0;
    for (long k = 0; k < 200; ++k) total += poisson_pmf(k, 17.5);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi-square accepts matching counts and rejects shifted ones") {
    Rng rng(6, 0);
    std::vector<long> good, bad;
    for (int i = 0; i < 20000; ++i) {
        good.push_back(rng.poisson(6.0));
        bad.push_back(rng.poisson(6.8));
    }
    CHECK(chi_square_poisson(good, 6.0).p_value > 1e-3);
    CHECK(chi_square_poisson(bad, 6.0).p_value < 1e-6);
}

TEST_CASE("ks test accepts the true law and rejects a biased one") {
    Rng rng(7, 0);
    std::vector<double> data;
    for (int i = 0; i < 5000; ++i) data.push_back(rng.uniform());
    auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_test(data, uniform_cdf).p_value > 1e-3);

    std::vector<double> skewed;
    for (int i = 0; i < 5000; ++i) skewed.push_back(std::pow(rng.uniform(), 1.15));
    CHECK(ks_test(skewed, uniform_cdf).p_value < 1e-4);
}
