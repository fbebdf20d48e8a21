#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "arena/rng.hpp"

using namespace arena;

TEST_SUITE("rng") {

TEST_CASE("same seed, same stream") {
    Rng a(123);
    Rng b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates streams") {
    const auto s1 = derive_seed(42, 1);
    const auto s2 = derive_seed(42, 2);
    const auto s3 = derive_seed(43, 1);
    CHECK(s1 != s2);
    CHECK(s1 != s3);
    CHECK(derive_seed(42, 1) == s1);
}

TEST_CASE("uniform stays in bounds") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const auto v = rng.uniform(-3, 12);
        CHECK(v >= -3);
        CHECK(v <= 12);
    }
    CHECK(rng.uniform(5, 5) == 5);
}

TEST_CASE("uniform covers the range") {
    Rng rng(11);
    std::vector<int> hits(8, 0);
    for (int i = 0; i < 8000; ++i) ++hits[rng.uniform(0, 7)];
    for (int h : hits) CHECK(h > 0);
}

TEST_CASE("shuffle produces a permutation") {
    Rng rng(3);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(w);
    CHECK(w != v);  // astronomically unlikely to be identity
    std::sort(w.begin(), w.end());
    CHECK(w == v);
}

TEST_CASE("permutation is valid and seed-stable") {
    Rng a(9);
    Rng b(9);
    const auto p = a.permutation(16);
    CHECK(p == b.permutation(16));
    std::vector<std::size_t> sorted(p.begin(), p.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 16; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("normal moments are sane") {
    Rng rng(5);
    const int n = 20000;
    double sum = 0;
    double sq = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - 1.0) < 0.05);
}

}  // TEST_SUITE
