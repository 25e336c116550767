#pragma once

// Symbolic sums of Hermitian Pauli strings. Used to form L^dag L products
// exactly, without dense matrices, on registers of any size.

#include <map>
#include <vector>

#include "jumpforge/qstate.hpp"

namespace jumpforge::pauli {

/// Sorted factors restricted to X, Y, Z.
using String = std::vector<Factor>;

/// Linear combination of Pauli strings; the empty string is the identity.
using Polynomial = std::map<String, cplx, bool (*)(const String&, const String&)>;

Polynomial make_polynomial();

/// Rewrites SM = (X + iY)/2 and SP = (X - iY)/2 and collects terms.
Polynomial expand(const OperatorSum& op);

Polynomial adjoint(const Polynomial& p);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
void accumulate(Polynomial& into, const Polynomial& p, cplx scale = 1.0);

/// Removes terms with |coefficient| <= tol.
void prune(Polynomial& p, double tol);

/// L^dag L, pruned at 1e-13 relative to the largest coefficient.
Polynomial gram(const OperatorSum& op);

}  // namespace jumpforge::pauli
