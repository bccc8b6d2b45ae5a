// Tour of the exact-algebra layer: bigraded harmonic spaces, their dimension
// law, the orthogonal layer decomposition P = sum_k |z|^{2k} P_k, and the
// operators (Wirtinger derivatives, Laplacian) that everything else builds on.
// All arithmetic here is rational, so every printed identity is exact.

#include "tsm/harmonic.hpp"
#include "tsm/polynomial.hpp"

#include <iostream>

using namespace tsm;

int main() {
    // --- dimension table -------------------------------------------------
    // dim H(p,q) on C^n; note the collapse at n = 1, where every space with
    // p, q >= 1 is zero and the bigraded expansion is a Fourier series.
    for (int n = 1; n <= 3; ++n) {
        std::cout << "dim H(p,q) on C^" << n << ":\n     ";
        for (int q = 0; q <= 3; ++q) std::cout << " q=" << q;
        std::cout << "\n";
        for (int p = 0; p <= 3; ++p) {
            std::cout << "  p=" << p << " ";
            for (int q = 0; q <= 3; ++q)
                std::cout << "  " << harmonic_space_dimension(n, p, q);
            std::cout << "\n";
        }
    }

    // --- a concrete basis ------------------------------------------------
    const int n = 2;
    const auto basis = harmonic_space_basis(n, 2, 1);
    std::cout << "\nbasis of H(2,1) on C^2 (" << basis.size() << " elements):\n";
    for (const auto& P : basis) {
        std::cout << format_polynomial(P);
        std::cout << "  laplacian is zero: " << (laplacian(P).is_zero() ? "yes" : "no") << "\n";
    }

    // --- layer decomposition ---------------------------------------------
    // Multiplying a harmonic element by |z|^2 leaves the harmonic world; the
    // decomposition recovers exact rational layers and reassembles the input.
    const auto r2 = BigradedPolynomial::norm_squared(n);
    const auto mixed = r2 * basis[0];
    const auto layers = harmonic_decompose(mixed);
    size_t nonzero = 0;
    for (const auto& layer : layers)
        if (!layer.is_zero()) ++nonzero;
    std::cout << "\n|z|^2 * (first basis element) has " << nonzero
              << " nonzero layer(s), at bidegree:";
    const auto d = bidegree(mixed);
    for (size_t k = 0; k < layers.size(); ++k)
        if (!layers[k].is_zero())
            std::cout << " (" << d->first - static_cast<int>(k) << ","
                      << d->second - static_cast<int>(k) << ")";
    std::cout << "\n";

    BigradedPolynomial rebuilt = BigradedPolynomial::zero(n);
    BigradedPolynomial r2k = BigradedPolynomial::constant(n, CRat(1L));
    for (size_t k = 0; k < layers.size(); ++k) {
        rebuilt = rebuilt + r2k * layers[k];
        r2k = r2k * r2;
    }
    std::cout << "layers reassemble the product exactly: "
              << ((rebuilt - mixed).is_zero() ? "yes" : "no") << "\n";
    return 0;
}
