#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace edgestat {

// Raised when C(n,k) exceeds the enumeration budget; callers should fall
// back to Monte Carlo estimation.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumBudget = 100'000'000;

// Revolving-door (minimal-change) enumeration of k-subsets of {0..n-1}:
// consecutive visited subsets differ by one element swapped out and one
// swapped in, so an edge count can be maintained with one row-popcount per
// move. Order for A(m,j): A(m-1,j) then, with m-1 held, A(m-1,j-1) reversed.
//
// Callbacks: on_add(v), on_remove(v) mutate the caller's running state;
// on_visit() fires once per subset, C(n,k) times in total.
template <class OnAdd, class OnRemove, class OnVisit>
void for_each_ksubset_revolving(int n, int k, OnAdd&& add, OnRemove&& remove,
                                OnVisit&& visit) {
    if (k < 0 || k > n) throw std::invalid_argument("for_each_ksubset_revolving: need 0 <= k <= n");

    // gen(m, j, fwd) assumes the current set restricted to [0,m) equals
    // {0..j-1} and leaves it at {0..j-2} u {m-1}; the reverse direction
    // mirrors that contract.
    auto gen = [&](auto&& self, int m, int j, bool fwd) -> void {
        if (j == 0 || j == m) {
            visit();
            return;
        }
        if (fwd) {
            self(self, m - 1, j, true);
            remove(j >= 2 ? j - 2 : m - 2);
            add(m - 1);
            self(self, m - 1, j - 1, false);
        } else {
            self(self, m - 1, j - 1, true);
            add(j >= 2 ? j - 2 : m - 2);
            remove(m - 1);
            self(self, m - 1, j, false);
        }
    };

    for (int v = 0; v < k; ++v) add(v);
    gen(gen, n, k, true);
}

// The same enumeration flattened to a replayable op list, for sweeps that
// revisit one (n,k) across millions of graphs. Ops: v+1 = add v,
// -(v+1) = remove v, 0 = visit.
std::vector<std::int8_t> subset_move_script(int n, int k);

template <class OnAdd, class OnRemove, class OnVisit>
void replay_subset_script(const std::vector<std::int8_t>& script, OnAdd&& add,
                          OnRemove&& remove, OnVisit&& visit) {
    for (std::int8_t op : script) {
        if (op > 0)
            add(op - 1);
        else if (op < 0)
            remove(-op - 1);
        else
            visit();
    }
}

} // namespace edgestat
