#pragma once

#include <Eigen/Dense>

namespace incde {

/// T x 6 path, one Voigt vector per row, row index = nominal step.
using SeriesMatrix = Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>;
using StrainSeries = SeriesMatrix;
using StressSeries = SeriesMatrix;

}  // namespace incde
