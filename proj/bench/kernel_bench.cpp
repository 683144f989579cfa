// Times the OpenMP kernels against the serial reference on Q-network-shaped
// problems. Run with --quick for a fast pass.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <omp.h>

#include "rlqas/kernels.hpp"
#include "rlqas/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> random_buf(std::size_t n, rlqas::SplitMix64& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

struct Case {
    const char* name;
    std::size_t m, n, k;
};

void bench_case(const Case& c, int reps) {
    rlqas::SplitMix64 rng(42);
    const std::vector<double> a = random_buf(c.m * c.k, rng);
    const std::vector<double> b = random_buf(c.n * c.k, rng);
    std::vector<double> out(c.m * c.n);

    auto time_it = [&](auto&& fn) {
        fn(a.data(), b.data(), out.data(), c.m, c.n, c.k);  // warm up
        const auto t0 = Clock::now();
        for (int r = 0; r < reps; ++r) fn(a.data(), b.data(), out.data(), c.m, c.n, c.k);
        return seconds_since(t0) / reps;
    };

    const double t_serial = time_it(rlqas::kernels::serial::matmul_nt);
    const double t_omp = time_it(rlqas::kernels::matmul_nt);
    const double flops = 2.0 * static_cast<double>(c.m) * c.n * c.k;
    std::printf("%-28s serial %8.3f ms (%6.2f GF/s)   omp %8.3f ms (%6.2f GF/s)   x%.2f\n",
                c.name, 1e3 * t_serial, flops / t_serial * 1e-9, 1e3 * t_omp,
                flops / t_omp * 1e-9, t_serial / t_omp);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;

    std::printf("matmul_nt, %d OpenMP thread(s)\n", omp_get_max_threads());
    const int reps = quick ? 3 : 20;
    const Case cases[] = {
        {"batch64 forward 320->1000", 64, 1000, 320},
        {"batch64 hidden 1000->1000", 64, 1000, 1000},
        {"batch64 head 1000->8", 64, 8, 1000},
        {"batch64 forward 320->128", 64, 128, 320},
        {"batch64 hidden 128->128", 64, 128, 128},
    };
    for (const Case& c : cases) bench_case(c, reps);
    return 0;
}
