#pragma once

// File formats:
//   .dtns  one JSON header line {"order","dims","dtype":"f64","endianness":"little"}
//          followed by the row-major payload as little-endian IEEE-754 doubles.
//   .csv   plain comma-separated rows of a matrix, no header.

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tensordict/tensor.hpp"

namespace tensordict::io {

void write_dtns(std::ostream& out, const Tensor& t);
Tensor read_dtns(std::istream& in);

void write_dtns(const std::filesystem::path& path, const Tensor& t);
Tensor read_dtns(const std::filesystem::path& path);

// A matrix is stored as an order-2 tensor with dims [rows, cols].
void write_matrix_dtns(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_dtns(const std::filesystem::path& path);

Tensor matrix_to_tensor(const Eigen::MatrixXd& m);
Eigen::MatrixXd tensor_to_matrix(const Tensor& t);

/// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, const Eigen::MatrixXd& m);
void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_csv(std::istream& in);
Eigen::MatrixXd read_csv(const std::filesystem::path& path);

/// CSV with a header row; rows are written as given.
void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace tensordict::io
