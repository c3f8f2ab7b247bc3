#pragma once

#include <string>
#include <string_view>

namespace heatlab {

enum class ModelKind { Euclidean, HyperbolicH3, Sphere2, Circle };

/// A rotationally symmetric model manifold seen from its base point y.
/// Immutable; all geometry is a function of geodesic distance from y.
class ModelSpace {
 public:
  static ModelSpace euclidean(int n);
  /// Hyperbolic 3-space with sectional curvature -kappa.
  static ModelSpace hyperbolic3(double kappa = 1.0);
  static ModelSpace sphere2();
  static ModelSpace circle();

  ModelKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return n_; }
  double curvatureScale() const noexcept { return kappa_; }
  /// R(y).
  double scalarCurvature() const noexcept;
  /// Sharpest K >= 0 with Rc >= -K g.
  double ricciLowerBound() const noexcept;
  /// +infinity for the non-compact models.
  double injectivityRadius() const noexcept;
  /// Cutoff radius r used by the parametrix and the moment functionals.
  double defaultCutoffRadius() const noexcept;
  bool compact() const noexcept;
  /// Selector string understood by parseModel, e.g. "h3:4".
  std::string name() const;

  friend bool operator==(const ModelSpace&, const ModelSpace&) = default;

 private:
  ModelSpace(ModelKind kind, int n, double kappa) : kind_(kind), n_(n), kappa_(kappa) {}

  ModelKind kind_;
  int n_;
  double kappa_;
};

/// "euclidean:<n>", "h3[:kappa]", "s2", "s1"; case-insensitive.
ModelSpace parseModel(std::string_view selector);

/// Area of the unit sphere S^{n-1} in R^n (2 for n = 1).
double unitSphereArea(int n);

/// Surface measure of the geodesic sphere of radius rho (both points for the circle).
double areaDensity(const ModelSpace& m, double rho);
double logAreaDensity(const ModelSpace& m, double rho);
/// A'(rho) / A(rho).
double areaLogDerivative(const ModelSpace& m, double rho);
/// rho * A'(rho) / A(rho), with its finite limit n - 1 at rho = 0. Exactly n - 1
/// for flat models.
double radialAreaLogDerivative(const ModelSpace& m, double rho);

/// sqrt(det g) in normal coordinates as a radial profile: A(d) / (omega_{n-1} d^{n-1}).
double normalDensity(const ModelSpace& m, double d);

/// Volume of the ball of radius rho in the space form of sectional curvature
/// -K/(n-1), K = m.ricciLowerBound().
double comparisonVolume(const ModelSpace& m, double rho);

/// Volume of the geodesic ball B(rho) in the model itself.
double ballVolume(const ModelSpace& m, double rho);

}  // namespace heatlab
