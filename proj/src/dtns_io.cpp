#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "tensordict/io.hpp"

namespace tensordict::io {

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return out;
}

}  // namespace

void write_dtns(std::ostream& out, const Tensor& t) {
  nlohmann::ordered_json header;
  header["order"] = t.order();
  header["dims"] = t.dims();
  header["dtype"] = "f64";
  header["endianness"] = "little";
  out << header.dump() << '\n';
  for (Index i = 0; i < t.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(t.data()[i]));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
  }
  if (!out) throw FormatError("failed writing .dtns payload");
}

Tensor read_dtns(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(".dtns: missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(".dtns: bad header: ") + e.what());
  }
  if (header.value("dtype", "") != "f64") throw FormatError(".dtns: dtype must be f64");
  if (header.value("endianness", "") != "little")
    throw FormatError(".dtns: endianness must be little");
  if (!header.contains("dims") || !header["dims"].is_array())
    throw FormatError(".dtns: dims missing");
  std::vector<Index> dims = header["dims"].get<std::vector<Index>>();
  if (header.value("order", -1) != static_cast<int>(dims.size()))
    throw FormatError(".dtns: order does not match dims");
  const Index count = Tensor::product(dims);
  Eigen::VectorXd data(count);
  for (Index i = 0; i < count; ++i) {
    char buf[8];
    if (!in.read(buf, 8)) throw FormatError(".dtns: truncated payload");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    data[i] = std::bit_cast<double>(to_little(bits));
  }
  return Tensor(std::move(dims), std::move(data));
}

void write_dtns(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_dtns(out, t);
}

Tensor read_dtns(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_dtns(in);
}

Tensor matrix_to_tensor(const Eigen::MatrixXd& m) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMat rm = m;
  return Tensor({m.rows(), m.cols()}, Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size()));
}

Eigen::MatrixXd tensor_to_matrix(const Tensor& t) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (t.order() != 2) throw FormatError("expected an order-2 tensor");
  return Eigen::Map<const RowMat>(t.data().data(), t.dim(0), t.dim(1));
}

void write_matrix_dtns(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  write_dtns(path, matrix_to_tensor(m));
}

Eigen::MatrixXd read_matrix_dtns(const std::filesystem::path& path) {
  return tensor_to_matrix(read_dtns(path));
}

}  // namespace tensordict::io
