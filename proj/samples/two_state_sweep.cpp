// Sweeps the two-state family [[a, 1-a], [1-b, b]] and prints the three
// rates next to each other; they coincide for every (a, b).

#include <cstdio>

#include "mixcert/mixcert.hpp"

int main() {
    std::printf("%6s %6s %12s %12s %12s\n", "a", "b", "1-kappa", "r(V)", "|lambda_2|");
    for (int ia = 1; ia < 10; ia += 2) {
        for (int ib = 1; ib < 10; ib += 2) {
            const double a = ia / 10.0;
            const double b = ib / 10.0;
            const auto p = mixcert::validate_matrix({{a, 1.0 - a}, {1.0 - b, b}});
            const double one_minus_kappa = 1.0 - mixcert::kappa_table(p).global();
            const double r = mixcert::spectral_radius(
                mixcert::build_V(p, mixcert::CouplingMode::LemmaResidual).entries);
            const double lambda2 = mixcert::second_eigenvalue_modulus(p);
            std::printf("%6.2f %6.2f %12.9f %12.9f %12.9f\n", a, b, one_minus_kappa, r, lambda2);
        }
    }
}
