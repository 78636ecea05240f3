#include "mdicke/basis.hpp"

#include "mdicke/model.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace mdicke {

std::uint64_t binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

namespace {

// Compositions of `total` into `parts` nonnegative integers.
std::uint64_t compositions(int total, int parts)
{
    if (parts == 0) return total == 0 ? 1 : 0;
    return binomial(total + parts - 1, parts - 1);
}

}  // namespace

SymmetricBasis::SymmetricBasis(int atoms, int levels, int n_max, std::size_t mem_cap_bytes)
    : atoms_(atoms), levels_(levels), n_max_(n_max)
{
    if (atoms < 1) throw InputError("basis: N must be >= 1");
    if (levels < 2) throw InputError("basis: levels must be >= 2");
    if (n_max < 0) throw InputError("basis: photon cutoff must be >= 0");

    dim_atoms_ = binomial(atoms + levels - 1, levels - 1);
    const double total = static_cast<double>(dim_atoms_) * (n_max + 1);
    if (total * kBytesPerState > static_cast<double>(mem_cap_bytes)) {
        throw InputError("basis: dimension " + std::to_string(static_cast<long long>(total)) +
                         " exceeds the memory cap");
    }

    occ_.reserve(dim_atoms_ * levels);
    std::vector<int> chi(levels, 0);
    chi[levels - 1] = atoms;
    // Ascending lexicographic successor: bump the rightmost position that can
    // take one atom from the tail, then push the remaining tail to the end.
    while (true) {
        occ_.insert(occ_.end(), chi.begin(), chi.end());
        int k = levels - 2;
        int tail = chi[levels - 1];
        while (k >= 0 && tail == 0) {
            tail += chi[k];
            --k;
        }
        if (k < 0) break;
        // positions k+1..l-1 hold `tail` atoms in total; move one to k
        chi[k] += 1;
        tail -= 1;
        for (int i = k + 1; i < levels; ++i) chi[i] = 0;
        chi[levels - 1] = tail;
    }
    if (occ_.size() != dim_atoms_ * levels) {
        throw std::logic_error("basis: enumeration count mismatch");
    }
}

std::size_t SymmetricBasis::index_of(std::span<const int> chi) const
{
    if (static_cast<int>(chi.size()) != levels_) throw std::out_of_range("index_of: wrong length");
    int remaining = atoms_;
    std::uint64_t rank = 0;
    for (int k = 0; k + 1 < levels_; ++k) {
        if (chi[k] < 0 || chi[k] > remaining) throw std::out_of_range("index_of: invalid occupation");
        for (int v = 0; v < chi[k]; ++v) rank += compositions(remaining - v, levels_ - k - 1);
        remaining -= chi[k];
    }
    if (chi[levels_ - 1] != remaining) throw std::out_of_range("index_of: occupations do not sum to N");
    return static_cast<std::size_t>(rank);
}

}  // namespace mdicke
