#include <doctest.h>
#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "tensordict/errors.hpp"
#include "tensordict/io.hpp"
#include "tensordict/random.hpp"

using namespace tensordict;

TEST_SUITE("io") {

TEST_CASE("dtns header is one JSON line and the payload is little-endian f64") {
  Tensor t({2, 3});
  for (Index i = 0; i < 6; ++i) t.data()[i] = 0.5 * double(i) - 1.0;
  std::stringstream buf;
  io::write_dtns(buf, t);
  std::string header;
  std::getline(buf, header);
  const auto doc = nlohmann::json::parse(header);
  CHECK(doc.at("order") == 2);
  CHECK(doc.at("dims") == nlohmann::json::array({2, 3}));
  CHECK(doc.at("dtype") == "f64");
  CHECK(doc.at("endianness") == "little");

  unsigned char bytes[8];
  buf.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
  double first;
  std::memcpy(&first, &bits, 8);
  CHECK(first == -1.0);
}

TEST_CASE("dtns round trip is exact") {
  Rng rng(11);
  Tensor t({3, 2, 4});
  t.data() = gaussian_vector(t.size(), rng);
  t.data()[0] = std::numeric_limits<double>::denorm_min();
  std::stringstream buf;
  io::write_dtns(buf, t);
  const Tensor back = io::read_dtns(buf);
  CHECK(back.dims() == t.dims());
  CHECK((back.data().array() == t.data().array()).all());
}

TEST_CASE("dtns rejects malformed input") {
  std::stringstream empty;
  CHECK_THROWS_AS(io::read_dtns(empty), FormatError);
  std::stringstream bad_dtype(R"({"order":1,"dims":[2],"dtype":"f32","endianness":"little"})" "\n");
  CHECK_THROWS_AS(io::read_dtns(bad_dtype), FormatError);
  std::stringstream truncated(R"({"order":1,"dims":[2],"dtype":"f64","endianness":"little"})" "\nabc");
  CHECK_THROWS_AS(io::read_dtns(truncated), FormatError);
  std::stringstream mismatch(R"({"order":2,"dims":[2],"dtype":"f64","endianness":"little"})" "\n");
  CHECK_THROWS_AS(io::read_dtns(mismatch), FormatError);
}

TEST_CASE("matrix files keep rows and columns") {
  Rng rng(12);
  const Eigen::MatrixXd m = gaussian_matrix(3, 5, rng);
  const auto path = std::filesystem::temp_directory_path() / "tensordict_io_test.dtns";
  io::write_matrix_dtns(path, m);
  const Eigen::MatrixXd back = io::read_matrix_dtns(path);
  std::filesystem::remove(path);
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 5);
  CHECK(back == m);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(3.0) == "3");
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const double v = gaussian_vector(1, rng)[0] * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("csv round trip and errors") {
  Rng rng(14);
  const Eigen::MatrixXd m = gaussian_matrix(4, 3, rng);
  std::stringstream buf;
  io::write_csv(buf, m);
  CHECK(io::read_csv(buf) == m);
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv(ragged), FormatError);
  std::stringstream text("1,x\n");
  CHECK_THROWS_AS(io::read_csv(text), FormatError);
}

}
