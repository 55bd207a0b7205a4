#include "core/tables.hpp"

#include <fstream>
#include <sstream>

namespace tw {

namespace {

constexpr const char* kMagic = "tiltedwalk-table";
constexpr int kFormatVersion = 1;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_one(std::ostream& os, const char* kind, const ExactTable& t,
               std::uint64_t& hash) {
  for (int n = 0; n <= t.nmax(); ++n)
    for (int m = -t.nmax(); m <= t.nmax(); ++m)
      for (int mark = 0; mark < t.mark_dim(); ++mark) {
        const BigInt& v = t.at(n, m, mark);
        if (v == 0) continue;
        std::ostringstream line;
        line << kind << ' ' << n << ' ' << m << ' ' << mark << ' ' << to_decimal(v) << '\n';
        hash = fnv1a(line.str(), hash);
        os << line.str();
      }
}

}  // namespace

void write_tables(const WalkTables& t, std::ostream& os) {
  os << kMagic << " v" << kFormatVersion << '\n';
  os << "model " << t.model << '\n';
  os << "weight " << t.weight << '\n';
  os << "nmax " << t.nmax << '\n';
  os << "wbase " << t.w_base << '\n';
  os << "markdim " << t.partition.mark_dim() << '\n';
  os << "columns kind n m_units mark count\n";
  std::uint64_t hash = 1469598103934665603ull;
  write_one(os, "N", t.partition, hash);
  write_one(os, "a", t.up_bridge, hash);
  write_one(os, "d", t.down_bridge, hash);
  write_one(os, "h", t.upper_half, hash);
  write_one(os, "r", t.rev_descent, hash);
  os << "end " << hash << '\n';
}

WalkTables read_tables(std::istream& is) {
  WalkTables t;
  std::string line;
  if (!std::getline(is, line) || line != std::string(kMagic) + " v1")
    fail(ErrorCode::Io, "table: bad magic/version");
  int mark_dim = 1;
  auto expect_kv = [&](const char* key) {
    if (!std::getline(is, line)) fail(ErrorCode::Io, "table: truncated header");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) fail(ErrorCode::Io, std::string("table: expected '") + key + "'");
    std::string rest;
    std::getline(ls, rest);
    return rest.empty() ? rest : rest.substr(1);
  };
  t.model = expect_kv("model");
  t.weight = expect_kv("weight");
  t.nmax = std::stoi(expect_kv("nmax"));
  t.w_base = (std::uint64_t)std::stoull(expect_kv("wbase"));
  mark_dim = std::stoi(expect_kv("markdim"));
  expect_kv("columns");
  if (t.nmax < 0 || t.nmax > 100000 || mark_dim < 1 || mark_dim > 1000000)
    fail(ErrorCode::Io, "table: implausible header");

  t.partition = ExactTable(t.nmax, mark_dim);
  t.up_bridge = ExactTable(t.nmax, mark_dim);
  t.down_bridge = ExactTable(t.nmax, mark_dim);
  t.upper_half = ExactTable(t.nmax, mark_dim);
  t.rev_descent = ExactTable(t.nmax, mark_dim);

  std::uint64_t hash = 1469598103934665603ull;
  bool got_end = false;
  while (std::getline(is, line)) {
    if (line.rfind("end ", 0) == 0) {
      std::uint64_t declared = std::stoull(line.substr(4));
      if (declared != hash) fail(ErrorCode::Io, "table: checksum mismatch");
      got_end = true;
      break;
    }
    hash = fnv1a(line + "\n", hash);
    std::istringstream ls(line);
    std::string kind, count;
    int n, m, mark;
    if (!(ls >> kind >> n >> m >> mark >> count))
      fail(ErrorCode::Io, "table: bad row '" + line + "'");
    ExactTable* dst = nullptr;
    if (kind == "N") dst = &t.partition;
    else if (kind == "a") dst = &t.up_bridge;
    else if (kind == "d") dst = &t.down_bridge;
    else if (kind == "h") dst = &t.upper_half;
    else if (kind == "r") dst = &t.rev_descent;
    else fail(ErrorCode::Io, "table: unknown kind '" + kind + "'");
    dst->at(n, m, mark) = from_decimal(count);
  }
  if (!got_end) fail(ErrorCode::Io, "table: truncated (no end marker)");
  return t;
}

void write_tables_file(const WalkTables& t, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_tables(t, os);
  if (!os.good()) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

WalkTables read_tables_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return read_tables(is);
}

}  // namespace tw
