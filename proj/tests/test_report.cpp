#include <doctest.h>

#include <cstdlib>

#include "qnm/report.hpp"

using namespace qnm;

TEST_CASE("doubles print with 17 significant digits and round-trip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(std::nan("")) == "null");
  for (double v : {0.785398163397448, -0.27465307216702739, 1e-17, 123456789.123}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("JSON keeps insertion order") {
  nlohmann::ordered_json j;
  j["zeta"] = 1;
  j["alpha"] = 0.5;
  j["list"] = {1, 2};
  const auto text = dump_json(j);
  CHECK(text.find("zeta") < text.find("alpha"));
  CHECK(text.back() == '\n');
  CHECK(nlohmann::json::parse(text)["alpha"].get<double>() == 0.5);
}

TEST_CASE("sha256 test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
