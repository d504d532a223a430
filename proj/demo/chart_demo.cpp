// Prints the q1 = 0 spectrum and a few points of the alpha^2 = 0.25 chart.
#include <cstdio>

#include "twoell/twoell.hpp"

int main() {
    using namespace twoell;
    const double alpha = 0.5;
    std::printf("q1 = 0, alpha^2 = 0.25\n");
    for (const auto& v : eigenvalues_at(0, alpha, 16.5)) std::printf("  %8.4f  %s  x%zu\n", v.lambda, to_string(v.br), v.multiplicity());

    std::printf("\nfirst five curves at q1 = 0, 2.5, 5\n");
    const auto curves = chart(alpha, 5, 3, 2);
    for (const auto& c : curves) {
        std::printf("  n=%-4s %-4s", c.label.text().c_str(), to_string(c.label.member));
        for (const auto& p : c.points) std::printf("  %10.6f", p.lambda);
        std::printf("\n");
    }

    const auto f = eigenfunction(curve_label::make(1, parity::even), 2.0, alpha);
    std::printf("\nn = 1/2 even at q1 = 2: lambda = %.10f, Phi(0) = %.6f, Phi(pi) = %.6f\n", f.lambda,
                eval_angular(f, 0), eval_angular(f, pi));
}
