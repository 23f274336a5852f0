#pragma once

// Shared fixture monoids for tests: the free monoid on {y,z}, the cone
// monoid with family t (deg(y,z) >= every t-exponent), and the
// support-constrained monoid on {Y,Z} with families X, T.

#include "staride/monoid.hpp"

namespace staride::testspec {

inline MonoidSpecPtr free2()
{
    return std::make_shared<MonoidSpec>(
        std::vector<std::string>{"y", "z"}, std::vector<std::string>{},
        std::vector<MonoidRule>{NonNegRule{}});
}

inline MonoidSpecPtr cone_t()
{
    LinearDegreeRule lin{DegreeFunctional::of({Selector::scalar("y"), Selector::scalar("z")}), "t"};
    return std::make_shared<MonoidSpec>(
        std::vector<std::string>{"y", "z"}, std::vector<std::string>{"t"},
        std::vector<MonoidRule>{NonNegRule{}, lin});
}

inline MonoidSpecPtr support_XT()
{
    SupportRule a{Selector::scalar("Z"),
                  {SupportRule::Witness{SupportRule::Witness::Kind::FamilyAll, "X"}}};
    SupportRule b{Selector::family_all("T"),
                  {SupportRule::Witness{SupportRule::Witness::Kind::Scalar, "Y"},
                   SupportRule::Witness{SupportRule::Witness::Kind::FamilyUpToTrigger, "X"}}};
    return std::make_shared<MonoidSpec>(
        std::vector<std::string>{"Y", "Z"}, std::vector<std::string>{"X", "T"},
        std::vector<MonoidRule>{NonNegRule{}, a, b});
}

} // namespace staride::testspec
