// Leading eigenvalues of the horizontal and vertical linearized blocks as the
// circulation grows, against the bound -1 - (mu+2)/(2(mu-1)).

#include <cstdio>
#include <vector>

#include "burgers/linearized.hpp"

using namespace burgers;

int main(int argc, char** argv) {
    const double mu = argc > 1 ? std::atof(argv[1]) : 2.0;
    const SpectralFamily coarse(20), fine(28);
    const WeightExponent m = WeightExponent::inf();
    std::printf("mu = %g, bound = %g\n\n", mu, horizontal_eigen_bound(mu));
    std::printf("%8s %22s %22s %10s\n", "alpha", "top horizontal", "top vertical", "converged");
    for (double alpha : std::vector<double>{0, 1, 3, 10, 30, 100}) {
        const auto h = spectrum_h(coarse, fine, mu, alpha, m);
        const auto v = spectrum_3(coarse, fine, mu, alpha, m);
        std::printf("%8g %22.12f %22.12f %5d/%-4d\n", alpha, h.abscissa(), v.abscissa(), h.converged_count(),
                    static_cast<int>(h.entries.size()));
    }
    return 0;
}
