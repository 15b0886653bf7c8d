#include "qtt/io.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtt {

namespace {

constexpr char kMagic[4] = {'Q', 'T', 'T', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_tt(const TensorTrain& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_tt: cannot open " + path);
  os.write(kMagic, 4);
  write_u32(os, static_cast<std::uint32_t>(t.cores.size()));
  for (const auto& c : t.cores) {
    write_u32(os, static_cast<std::uint32_t>(c.left()));
    write_u32(os, static_cast<std::uint32_t>(c.mode()));
    write_u32(os, static_cast<std::uint32_t>(c.right()));
  }
  for (const auto& c : t.cores)
    for (Index i = 0; i < c.data().size(); ++i) write_f64(os, c.data()[i]);
}

TensorTrain read_tt(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_tt: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("read_tt: bad magic");
  const std::uint32_t count = read_u32(is);
  std::vector<std::array<std::uint32_t, 3>> shapes(count);
  for (auto& s : shapes) s = {read_u32(is), read_u32(is), read_u32(is)};
  std::vector<Core3> cores;
  cores.reserve(count);
  for (const auto& s : shapes) {
    Core3 c(s[0], s[1], s[2]);
    for (Index i = 0; i < c.data().size(); ++i) c.data()[i] = read_f64(is);
    cores.push_back(std::move(c));
  }
  if (!is) throw std::runtime_error("read_tt: truncated file");
  TensorTrain t(std::move(cores));
  t.validate();
  return t;
}

void write_dense_csv(const TensorTrain& t, const std::string& path) {
  const Vector v = tt_to_dense(t);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_dense_csv: cannot open " + path);
  os << "index,value\n";
  os.precision(17);
  for (Index i = 0; i < v.size(); ++i) os << i << ',' << v[i] << '\n';
}

DataSet read_dataset_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_dataset_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_dataset_csv: empty file");
  int columns = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (columns != 2 && columns != 3)
    throw std::runtime_error("read_dataset_csv: expected 2 or 3 columns");
  DataSet data;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != columns)
      throw std::runtime_error("read_dataset_csv: ragged row");
    data.x.push_back(row[0]);
    data.y.push_back(row[1]);
    if (columns == 3) data.value.push_back(row[2]);
  }
  if (data.size() < 2) throw std::runtime_error("read_dataset_csv: need at least two points");
  return data;
}

void write_dataset_csv(const DataSet& data, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_dataset_csv: cannot open " + path);
  os.precision(17);
  os << (data.is_2d() ? "x,y,value\n" : "x,y\n");
  for (size_t i = 0; i < data.size(); ++i) {
    os << data.x[i] << ',' << data.y[i];
    if (data.is_2d()) os << ',' << data.value[i];
    os << '\n';
  }
}

}  // namespace qtt
