// Times serial vs OpenMP-parallel lambda sweeps on a few built-in models and
// checks that both give identical records.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "krein/parallel.hpp"
#include "krein/sweep.hpp"

namespace {

using namespace krein;

NevanlinnaModel bench_model(int dim) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix b = ComplexMatrix::Identity(dim, dim) * 0.5;
    ComplexMatrix r = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix g = ComplexMatrix::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) {
        a(i, i) = 0.3 * i;
        if (i + 1 < dim) {
            r(i, i + 1) = Complex(0.2, 0.1);
            r(i + 1, i) = Complex(0.2, -0.1);
        }
    }
    std::vector<HerglotzTerm> terms = {AffineTerm{a, b}, AcBoxTerm{-2.0, 2.0, r}, PoleTerm{3.0, g}};
    return NevanlinnaModel(dim, std::move(terms), "bench");
}

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Record>
bool same_records(const std::vector<Record>& a, const std::vector<Record>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].status != b[i].status || a[i].residual_bk != b[i].residual_bk) return false;
    }
    return true;
}

template <class Sweep>
void run(const char* label, int points, Sweep&& sweep) {
    const auto grid = GridSpec{-5.0, 5.0, points}.points();
    decltype(sweep(grid, Execution::Serial)) serial;
    decltype(serial) parallel;
    const double ts = seconds([&] { serial = sweep(grid, Execution::Serial); });
    const double tp = seconds([&] { parallel = sweep(grid, Execution::Parallel); });
    std::printf("%-12s points=%-6d serial=%.4fs parallel=%.4fs speedup=%.2f identical=%s\n", label, points, ts, tp,
                tp > 0 ? ts / tp : 0.0, same_records(serial, parallel) ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    int points = 2001;
    if (argc > 1) points = std::atoi(argv[1]);
    std::printf("threads=%d\n", max_threads());

    const auto model = bench_model(3);
    const SelfAdjointParameter theta = SelfAdjointParameter::matrix(ComplexMatrix::Identity(3, 3));
    ComplexMatrix d = ComplexMatrix::Identity(3, 3) * Complex(0.5, -1.0);
    d(0, 0) = 0.25;
    const DissipativeParameter dp(d);
    const CoupledSystem sys(model, bench_model(3));

    run("selfadjoint", points,
        [&](const std::vector<double>& g, Execution e) { return sweep_selfadjoint(model, theta, g, kDefaultRankTol, e); });
    run("dissipative", points,
        [&](const std::vector<double>& g, Execution e) { return sweep_dissipative(model, dp, g, kDefaultRankTol, e); });
    run("coupled", points,
        [&](const std::vector<double>& g, Execution e) { return sweep_coupled(sys, g, kDefaultRankTol, e); });
    return 0;
}
