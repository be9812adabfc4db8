#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cpgnn {

// Dense storage is row-major so a node's belief vector is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

using NodeId = std::size_t;
using ClassId = int;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: bad files, out-of-range ids, invalid configs.
class InputError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced by a numerical op, or a quantity that is undefined.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

std::string shape_string(Eigen::Index rows, Eigen::Index cols);

}  // namespace cpgnn
