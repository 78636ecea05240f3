// basis.hpp: permutation-symmetric N-atom Fock basis times a truncated
// photon ladder.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mdicke {

// C(n, k) as an unsigned 64-bit integer (0 when k < 0 or k > n).
std::uint64_t binomial(int n, int k);

// Occupation vectors chi (sum = N) of l levels, in ascending lexicographic
// order. Full states are |n_photon> (x) |chi> with flat index
// n * dim_atoms + atom_index, so a state vector reshapes row-major into a
// (n_max + 1) x dim_atoms array.
class SymmetricBasis {
public:
    // Rough ED footprint per basis state (Krylov vectors + sparse rows).
    static constexpr std::size_t kBytesPerState = 1024;

    SymmetricBasis(int atoms, int levels, int n_max,
                   std::size_t mem_cap_bytes = std::size_t{8} << 30);

    int atoms() const { return atoms_; }
    int levels() const { return levels_; }
    int n_max() const { return n_max_; }
    std::size_t dim_atoms() const { return dim_atoms_; }
    std::size_t dim_total() const { return dim_atoms_ * static_cast<std::size_t>(n_max_ + 1); }

    std::span<const int> occupation(std::size_t a) const
    {
        return {occ_.data() + a * levels_, static_cast<std::size_t>(levels_)};
    }

    // Rank of chi; throws std::out_of_range when chi is not in the basis.
    std::size_t index_of(std::span<const int> chi) const;

    std::size_t state(int photons, std::size_t atom_index) const
    {
        return static_cast<std::size_t>(photons) * dim_atoms_ + atom_index;
    }

private:
    int atoms_;
    int levels_;
    int n_max_;
    std::size_t dim_atoms_;
    std::vector<int> occ_;
};

}  // namespace mdicke
