// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/quadrature.hpp"

#include <string>

#include "core/errors.hpp"

namespace chhs {

namespace {

// Weights below are normalised to sum to 1 and scaled by 1/2 on insertion.
struct RuleBuilder {
  QuadratureRule rule;

  void centroid(double w) { add({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w); }

  void orbit3(double a, double w) {
    const double b = 1.0 - 2.0 * a;
    add({a, a, b}, w);
    add({a, b, a}, w);
    add({b, a, a}, w);
  }

  void orbit6(double a, double b, double w) {
    const double c = 1.0 - a - b;
    add({a, b, c}, w);
    add({a, c, b}, w);
    add({b, a, c}, w);
    add({b, c, a}, w);
    add({c, a, b}, w);
    add({c, b, a}, w);
  }

  void add(std::array<double, 3> p, double w) {
    rule.points.push_back(p);
    rule.weights.push_back(0.5 * w);
  }
};

}  // namespace

QuadratureRule QuadratureRule::triangle(int degree) {
  RuleBuilder b;
  if (degree <= 1) {
    b.rule.degree = 1;
    b.centroid(1.0);
  } else if (degree == 2) {
    b.rule.degree = 2;
    b.orbit3(1.0 / 6.0, 1.0 / 3.0);
  } else if (degree <= 4) {
    b.rule.degree = 4;
    b.orbit3(0.445948490915964886318329253883, 0.223381589678011465944827306094);
    b.orbit3(0.091576213509770743459571463402, 0.109951743655321867388506027239);
  } else if (degree == 5) {
    b.rule.degree = 5;
    b.centroid(0.225);
    b.orbit3(0.470142064105115089770441209513, 0.132394152788506181842206095722);
    b.orbit3(0.101286507323456338800987361915, 0.125939180544827151491127237611);
  } else if (degree <= 8) {
    // Dunavant, 16 points.
    b.rule.degree = 8;
    b.centroid(0.144315607677787168251091110489);
    b.orbit3(0.459292588292723156028815514494, 0.095091634267284624793896104388);
    b.orbit3(0.170569307751760206622293501491, 0.103217370534718250281791550292);
    b.orbit3(0.050547228317030975458423550596, 0.032458497623198080310925928341);
    b.orbit6(0.008394777409957605337213834539, 0.263112829634638113421785786284,
             0.027230314174434994264844690073);
  } else {
    throw ConfigError("no built-in triangle rule of degree " + std::to_string(degree));
  }
  return b.rule;
}

}  // namespace chhs
