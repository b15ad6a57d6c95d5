// Minimal library walkthrough: build a box, compute its sector polynomial,
// isolate the Lee-Yang zeros and print the first few along with u_2.

#include <iostream>

#include "leeyang/cumulants.hpp"
#include "leeyang/lattice.hpp"
#include "leeyang/partition.hpp"
#include "leeyang/zeros.hpp"

int main() {
    using namespace leeyang;
    using Real = Real40;

    const SpinDomain box = make_box(2, 1);  // 3x3
    const double beta = 0.3;
    const auto poly = transfer_partition<Real>(box, beta);
    const auto zs = find_zeros(poly);
    const auto cum = cumulants(poly, 4);

    std::cout << "3x3 box at beta = " << beta << "\n";
    std::cout << "zeros found: " << zs.angles.size() << " (total multiplicity "
              << zs.total_multiplicity() << ")\n";
    for (std::size_t i = 0; i < zs.angles.size() && i < 3; ++i)
        std::cout << "  theta_" << i + 1 << " = " << zs.angles[i].str(15) << "  x"
                  << zs.multiplicity[i] << "\n";
    std::cout << "u_2 = " << cum[2].str(15) << ", u_4 = " << cum[4].str(15) << "\n";
    return 0;
}
