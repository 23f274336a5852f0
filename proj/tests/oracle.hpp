#pragma once

// Brute-force reference model for ideal arithmetic in the free two-variable
// monomial ring k[y,z]: ideals are sets of lattice points, quantifiers run
// over an explicit box.  Deliberately shares no code with the engine beyond
// the exponent type; keep it dumb.
//
// Box soundness: for generating sets with entries in [-3,3], the inverse
// (R : I) is an upward-closed set whose minimal point (the componentwise
// corner) lies inside [-6,6]^2, so truncating the inner quantifier to that
// box changes nothing.

#include <set>
#include <utility>
#include <vector>

#include "staride/exponent.hpp"

namespace staride::oracle {

using Pt = std::pair<Exp, Exp>; // (a, b) standing for y^a * z^b

inline std::vector<Pt> box(Exp lo, Exp hi)
{
    std::vector<Pt> v;
    for (Exp a = lo; a <= hi; ++a)
        for (Exp b = lo; b <= hi; ++b) v.emplace_back(a, b);
    return v;
}

inline bool in_fingen(Pt u, const std::vector<Pt>& gens)
{
    for (auto [ga, gb] : gens)
        if (u.first >= ga && u.second >= gb) return true;
    return false;
}

/// { u in bx : for all g in den: u + g lies in the ideal generated by num }.
inline std::set<Pt> colon_set(const std::vector<Pt>& bx, const std::vector<Pt>& num,
                              const std::vector<Pt>& den)
{
    std::set<Pt> out;
    for (auto u : bx) {
        bool all = true;
        for (auto g : den)
            if (!in_fingen({u.first + g.first, u.second + g.second}, num)) all = false;
        if (all) out.insert(u);
    }
    return out;
}

inline std::set<Pt> intersect_set(const std::vector<Pt>& bx, const std::vector<Pt>& a,
                                  const std::vector<Pt>& b)
{
    std::set<Pt> out;
    for (auto u : bx)
        if (in_fingen(u, a) && in_fingen(u, b)) out.insert(u);
    return out;
}

/// (R : (R : I)) with the middle colon materialized on the box.
inline std::set<Pt> v_closure_set(const std::vector<Pt>& bx, const std::vector<Pt>& gens)
{
    const std::vector<Pt> unit{{0, 0}};
    auto inv = colon_set(bx, unit, gens);
    std::vector<Pt> inv_list(inv.begin(), inv.end());
    return colon_set(bx, unit, inv_list);
}

inline bool subset_on_box(const std::vector<Pt>& bx, const std::vector<Pt>& a,
                          const std::vector<Pt>& b)
{
    for (auto u : bx)
        if (in_fingen(u, a) && !in_fingen(u, b)) return false;
    return true;
}

} // namespace staride::oracle
