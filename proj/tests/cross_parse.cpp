// Runs `wnpi propagator` in CSV and JSON form and requires bit-identical numbers.

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  return pclose(p) == 0 ? out : std::string();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return 2;
  const std::string base = std::string("\"") + argv[1] + "\" propagator --k 2 --t 1 --y-min -1 --y-max 1.5 --y-steps 6 --n 48";
  const std::string csv = capture(base + " --format csv");
  const std::string js = capture(base + " --format json");
  if (csv.empty() || js.empty()) {
    std::fprintf(stderr, "propagator failed\n");
    return 1;
  }
  const auto rows = nlohmann::json::parse(js).at("rows");
  const std::vector<std::string> cols = {"y", "re", "im", "abs", "arg", "deviation"};

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  if (line != "y,re,im,abs,arg,deviation") {
    std::fprintf(stderr, "unexpected header: %s\n", line.c_str());
    return 1;
  }
  std::size_t r = 0;
  for (; std::getline(in, line); ++r) {
    if (r >= rows.size()) return 1;
    std::istringstream fields(line);
    std::string cell;
    for (const auto& c : cols) {
      std::getline(fields, cell, ',');
      if (std::stod(cell) != rows[r].at(c).get<double>()) {
        std::fprintf(stderr, "row %zu column %s: csv %s vs json %s\n", r, c.c_str(), cell.c_str(),
                     rows[r].at(c).dump().c_str());
        return 1;
      }
    }
  }
  if (r != rows.size() || r != 6) return 1;
  std::printf("%zu rows identical\n", r);
  return 0;
}
