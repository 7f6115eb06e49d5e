// Compares the OpenMP minor-enumeration kernel against the serial reference
// on random polynomial matrices and prints the timings.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

#include "neron/polymatrix.hpp"

using namespace neron;

namespace {

Polynomial random_poly(const VarTablePtr& vt, std::mt19937& rng, int terms, int maxdeg) {
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::vector<Term> ts;
    for (int t = 0; t < terms; ++t) {
        Monomial m(vt->size());
        for (std::size_t v = 0; v < vt->size(); ++v) m.exps[v] = deg(rng);
        int c = coef(rng);
        if (c == 0) c = 1;
        ts.push_back({std::move(m), Rat(c)});
    }
    return Polynomial::from_terms(vt, std::move(ts));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    std::size_t rows = quick ? 4 : 6;
    std::size_t cols = quick ? 6 : 9;
    std::size_t r = quick ? 3 : 4;
    int reps = quick ? 1 : 3;

    VarTablePtr vt = make_table({"a", "b", "c"},
                                {VarRole::Unknown, VarRole::Unknown, VarRole::Unknown});
    std::mt19937 rng(20240915);
    PolyMatrix m(rows, cols, vt);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = random_poly(vt, rng, 3, 2);

    std::cout << "matrix " << rows << "x" << cols << ", minors of size " << r << "\n";

    double t_serial = 0, t_parallel = 0;
    std::vector<MinorEntry> serial, parallel;
    for (int rep = 0; rep < reps; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        serial = all_minors_serial(m, r);
        t_serial += seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        parallel = all_minors(m, r);
        t_parallel += seconds_since(t0);
    }
    t_serial /= reps;
    t_parallel /= reps;

    bool equal = serial.size() == parallel.size();
    for (std::size_t i = 0; equal && i < serial.size(); ++i)
        equal = serial[i].rows == parallel[i].rows && serial[i].cols == parallel[i].cols &&
                serial[i].value == parallel[i].value;

    std::cout << "minors computed: " << serial.size() << "\n";
    std::cout << "serial:   " << t_serial << " s\n";
    std::cout << "parallel: " << t_parallel << " s\n";
    if (t_parallel > 0) std::cout << "speedup:  " << t_serial / t_parallel << "x\n";
    std::cout << "results identical: " << (equal ? "yes" : "NO") << "\n";
    return equal ? 0 : 1;
}
