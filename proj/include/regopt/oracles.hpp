#pragma once

#include <cstddef>

#include "regopt/core.hpp"

namespace regopt {

struct BoxSet {
    Vector lower;
    Vector upper;

    BoxSet(Vector lower, Vector upper);
    static BoxSet uniform(std::size_t dim, double lo, double hi);
    std::size_t dimension() const { return lower.size(); }
};

struct BallSet {
    Vector center;
    double radius;

    BallSet(Vector center, double radius);
    std::size_t dimension() const { return center.size(); }
};

// Unit simplex {x >= 0, sum x = 1}.
struct SimplexSet {
    std::size_t dim;

    explicit SimplexSet(std::size_t dim);
    std::size_t dimension() const { return dim; }
};

Vector project_box(const Vector& x, const BoxSet& set);
Vector project_ball(const Vector& x, const BallSet& set);
// Sort-and-threshold Euclidean projection, O(n log n).
Vector project_simplex(const Vector& x, const SimplexSet& set);

// Ties (zero gradient component) go to the lower bound.
Vector lmo_box(const Vector& g, const BoxSet& set);
// Zero gradient returns the center.
Vector lmo_ball(const Vector& g, const BallSet& set);
// Vertex e_i for the smallest i attaining min g.
Vector lmo_simplex(const Vector& g, const SimplexSet& set);

bool box_contains(const Vector& x, const BoxSet& set, double tol);
bool ball_contains(const Vector& x, const BallSet& set, double tol);
bool simplex_contains(const Vector& x, const SimplexSet& set, double tol);

// Type-erased wrappers carrying projection, LMO, diameter and membership.
FeasibleSet make_feasible_set(const BoxSet& set);
FeasibleSet make_feasible_set(const BallSet& set);
FeasibleSet make_feasible_set(const SimplexSet& set);

}  // namespace regopt
