#pragma once

#include <utility>
#include <vector>

#include "qtt/encoders.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

//! Scattered samples; 1D when value is empty (x->y), else 2D ((x,y)->value).
struct DataSet {
  std::vector<double> x, y, value;
  bool is_2d() const { return !value.empty(); }
  size_t size() const { return x.size(); }
};

enum class SplineKind { cubic, bspline };

//! Interpolating spline through 1D data (natural cubic or degree-k B-spline).
class SplineModel {
 public:
  SplineKind kind = SplineKind::cubic;
  int degree = 3;
  double start = 0.0, stop = 1.0;

  // natural cubic data
  std::vector<double> xs, ys, second_derivs;
  // b-spline data
  std::vector<double> knots, coeffs;

  double eval(double x) const;
};

//! Least-squares bicubic tensor B-spline over [0,1]^2 for scattered 2D data.
class SplineModel2 {
 public:
  int nbasis = 8;
  std::vector<double> knots;  // shared clamped uniform knots per dimension
  Matrix coeffs;              // nbasis x nbasis
  double eval(double x, double y) const;
};

//! Fit an interpolating spline; data must have distinct x (throws otherwise).
SplineModel spline_fit(const DataSet& data, SplineKind kind, int degree = 3);

//! Least-squares 2D fit with nbasis cubic B-splines per dimension.
SplineModel2 spline_fit_2d(const DataSet& data, int nbasis);

//! Sort -> spline_fit -> interpolative_tt on [start, stop) rescaled to the
//! dyadic grid; returns both artifacts.
std::pair<TensorTrain, SplineModel> data_driven_tt(const DataSet& data, int c,
                                                   const InterpolationConfig& cfg,
                                                   SplineKind kind, int degree = 3);

//! 2D variant (2c cores, serial ordering).
std::pair<TensorTrain, SplineModel2> data_driven_tt_2d(const DataSet& data, int c,
                                                       const InterpolationConfig& cfg,
                                                       int nbasis);

//! Cox-de Boor basis values of all nb degree-d B-splines at t.
std::vector<double> bspline_basis(const std::vector<double>& knots, int nb, int degree, double t);

}  // namespace qtt
