#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ssvrp/bench.hpp"
#include "ssvrp/error.hpp"

namespace ssvrp {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct Token {
  std::string text;
  int column = 0;
};

// Line-oriented reader: skips blank lines and '#' comments, keeps positions
// for error messages.
class LineReader {
 public:
  LineReader(std::istream& is, std::string source) : is_(is), source_(std::move(source)) {}

  bool next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      tokens_.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        tokens_.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
      }
      if (!tokens_.empty()) return true;
    }
    tokens_.clear();
    return false;
  }

  void require_next(const char* what) {
    if (!next()) fail(1, std::string("unexpected end of file, expected ") + what);
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  const std::string& word(std::size_t i) const {
    if (i >= tokens_.size()) fail(end_column(), "missing field");
    return tokens_[i].text;
  }

  [[noreturn]] void fail(int column, const std::string& msg) const {
    throw ParseError(source_, line_no_, column, msg);
  }
  [[noreturn]] void fail_at(std::size_t i, const std::string& msg) const {
    fail(i < tokens_.size() ? tokens_[i].column : end_column(), msg);
  }

  long long integer(std::size_t i) const {
    const std::string& s = word(i);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (...) {
      fail_at(i, "expected an integer, got '" + s + "'");
    }
    if (used != s.size()) fail_at(i, "expected an integer, got '" + s + "'");
    return v;
  }

  double real(std::size_t i) const {
    const std::string& s = word(i);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (...) {
      fail_at(i, "expected a number, got '" + s + "'");
    }
    if (used != s.size()) fail_at(i, "expected a number, got '" + s + "'");
    return v;
  }

  // Expects "<key> <integer>" on the current line.
  long long keyed_integer(const char* key) {
    expect_key(key, 2);
    return integer(1);
  }

  void expect_key(const char* key, std::size_t count) const {
    if (word(0) != key) fail_at(0, std::string("expected '") + key + "', got '" + word(0) + "'");
    if (size() != count) fail_at(std::min(size(), count), std::string("wrong number of fields for '") + key + "'");
  }

  void header(const char* magic) {
    require_next(magic);
    if (word(0) != magic) fail_at(0, std::string("not a ") + magic + " file");
    if (size() != 2) fail_at(1, "missing format version");
    const long long v = integer(1);
    if (v != kFormatVersion) fail_at(1, "unsupported format version " + std::to_string(v));
  }

  int line() const { return line_no_; }

 private:
  int end_column() const {
    if (tokens_.empty()) return 1;
    return tokens_.back().column + static_cast<int>(tokens_.back().text.size());
  }

  std::istream& is_;
  std::string source_;
  int line_no_ = 0;
  std::vector<Token> tokens_;
};

std::vector<Time> read_matrix(LineReader& in, int n) {
  std::vector<Time> travel;
  travel.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    in.require_next("a matrix row");
    if (static_cast<int>(in.size()) != n) in.fail_at(std::min<std::size_t>(in.size(), n), "matrix row needs " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      const long long v = in.integer(j);
      if (v < 0) in.fail_at(j, "negative travel time");
      travel.push_back(static_cast<Time>(v));
    }
  }
  return travel;
}

void write_matrix(std::ostream& os, const std::vector<Time>& travel, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) os << (j ? " " : "") << travel[static_cast<std::size_t>(i) * n + j];
    os << '\n';
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path, 0, 0, "cannot open file");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  return f;
}

}  // namespace

void write_instance(std::ostream& os, const Instance& inst) {
  os << "ssvrp-instance " << kFormatVersion << '\n';
  os << "name " << (inst.name().empty() ? "unnamed" : inst.name()) << '\n';
  os << "horizon " << inst.horizon() << '\n';
  os << "vehicles " << inst.vehicles() << '\n';
  os << "capacity ";
  if (inst.capacity_unbounded()) os << "inf\n";
  else os << inst.capacity() << '\n';
  os << "waiting " << inst.num_waiting() << '\n';
  os << "customers " << inst.num_customers() << '\n';
  os << "requests " << inst.num_requests() << '\n';
  os << "# id customer reveal demand service earliest latest probability\n";
  for (const auto& r : inst.requests())
    os << r.id << ' ' << r.customer << ' ' << r.reveal << ' ' << r.demand << ' ' << r.service << ' ' << r.earliest
       << ' ' << r.latest << ' ' << format_real(r.probability) << '\n';
  os << "matrix " << inst.num_vertices() << '\n';
  write_matrix(os, inst.travel_matrix(), inst.num_vertices());
  os << "end\n";
}

Instance read_instance(std::istream& is, const std::string& source) {
  LineReader in(is, source);
  in.header("ssvrp-instance");
  in.require_next("name");
  in.expect_key("name", 2);
  const std::string name = in.word(1);
  in.require_next("horizon");
  const long long horizon = in.keyed_integer("horizon");
  in.require_next("vehicles");
  const long long vehicles = in.keyed_integer("vehicles");
  in.require_next("capacity");
  in.expect_key("capacity", 2);
  const int capacity = in.word(1) == "inf" ? kUnboundedCapacity : static_cast<int>(in.integer(1));
  in.require_next("waiting");
  const long long waiting = in.keyed_integer("waiting");
  in.require_next("customers");
  const long long customers = in.keyed_integer("customers");
  in.require_next("requests");
  const long long count = in.keyed_integer("requests");
  if (count < 0) in.fail_at(1, "negative request count");

  std::vector<PotentialRequest> reqs;
  for (long long i = 0; i < count; ++i) {
    in.require_next("a request row");
    if (in.size() != 8) in.fail_at(std::min<std::size_t>(in.size(), 8), "request rows have 8 fields");
    PotentialRequest r;
    r.id = static_cast<int>(in.integer(0));
    r.customer = static_cast<int>(in.integer(1));
    r.reveal = static_cast<Time>(in.integer(2));
    r.demand = static_cast<int>(in.integer(3));
    r.service = static_cast<Time>(in.integer(4));
    r.earliest = static_cast<Time>(in.integer(5));
    r.latest = static_cast<Time>(in.integer(6));
    r.probability = in.real(7);
    reqs.push_back(r);
  }
  in.require_next("matrix");
  const long long nv = in.keyed_integer("matrix");
  if (nv != 1 + waiting + customers) in.fail_at(1, "matrix size does not match the vertex counts");
  std::vector<Time> travel = read_matrix(in, static_cast<int>(nv));
  in.require_next("end");
  in.expect_key("end", 1);
  const int end_line = in.line();
  try {
    return Instance(name, static_cast<int>(waiting), static_cast<int>(customers), std::move(travel),
                    static_cast<Time>(horizon), static_cast<int>(vehicles), capacity, std::move(reqs));
  } catch (const ConfigError& e) {
    throw ParseError(source, end_line, 1, std::string("invalid instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  auto f = open_in(path);
  return read_instance(f, path);
}

void save_instance(const std::string& path, const Instance& inst) {
  auto f = open_out(path);
  write_instance(f, inst);
}

void write_solution(std::ostream& os, const SolutionFile& sf) {
  os << "ssvrp-solution " << kFormatVersion << '\n';
  for (const auto& [k, v] : sf.meta) os << "meta " << k << ' ' << v << '\n';
  os << "routes " << sf.solution.routes.size() << '\n';
  for (std::size_t k = 0; k < sf.solution.routes.size(); ++k) {
    os << "route " << k;
    for (int w : sf.solution.routes[k]) os << ' ' << w << ':' << sf.solution.waits[w];
    os << '\n';
  }
  os << "end\n";
}

SolutionFile read_solution(std::istream& is, int num_waiting, const std::string& source) {
  LineReader in(is, source);
  in.header("ssvrp-solution");
  SolutionFile sf;
  in.require_next("routes");
  while (in.word(0) == "meta") {
    if (in.size() != 3) in.fail_at(std::min<std::size_t>(in.size(), 3), "meta lines have a key and a value");
    sf.meta[in.word(1)] = in.word(2);
    in.require_next("routes");
  }
  const long long nk = in.keyed_integer("routes");
  if (nk < 1) in.fail_at(1, "need at least one route");
  sf.solution = FirstStageSolution(static_cast<int>(nk), num_waiting);
  for (long long k = 0; k < nk; ++k) {
    in.require_next("a route line");
    if (in.word(0) != "route") in.fail_at(0, "expected 'route'");
    if (in.integer(1) != k) in.fail_at(1, "routes must be listed in order");
    for (std::size_t i = 2; i < in.size(); ++i) {
      const std::string& s = in.word(i);
      const auto colon = s.find(':');
      if (colon == std::string::npos) in.fail_at(i, "expected vertex:wait");
      int w = 0;
      long long wait = 0;
      try {
        std::size_t a = 0, b = 0;
        w = std::stoi(s.substr(0, colon), &a);
        wait = std::stoll(s.substr(colon + 1), &b);
        if (a != colon || b != s.size() - colon - 1) throw 0;
      } catch (...) {
        in.fail_at(i, "expected vertex:wait, got '" + s + "'");
      }
      if (w < 1 || w > num_waiting) in.fail_at(i, "vertex " + std::to_string(w) + " is not a waiting vertex");
      sf.solution.routes[k].push_back(w);
      sf.solution.waits[w] = static_cast<Time>(wait);
    }
  }
  in.require_next("end");
  in.expect_key("end", 1);
  return sf;
}

SolutionFile load_solution(const std::string& path, int num_waiting) {
  auto f = open_in(path);
  return read_solution(f, num_waiting, path);
}

void save_solution(const std::string& path, const SolutionFile& sol) {
  auto f = open_out(path);
  write_solution(f, sol);
}

void write_pool(std::ostream& os, const AddressPool& pool) {
  const int n = pool.size();
  os << "ssvrp-pool " << kFormatVersion << '\n';
  os << "size " << n << '\n';
  const bool coords = static_cast<int>(pool.x.size()) == n && static_cast<int>(pool.y.size()) == n;
  os << "coordinates " << (coords ? "yes" : "no") << '\n';
  if (coords)
    for (int i = 0; i < n; ++i) os << format_real(pool.x[i]) << ' ' << format_real(pool.y[i]) << '\n';
  os << "matrix\n";
  write_matrix(os, pool.travel, n);
  os << "end\n";
}

AddressPool read_pool(std::istream& is, const std::string& source) {
  LineReader in(is, source);
  in.header("ssvrp-pool");
  in.require_next("size");
  const long long n = in.keyed_integer("size");
  if (n < 1) in.fail_at(1, "pool must not be empty");
  in.require_next("coordinates");
  in.expect_key("coordinates", 2);
  const std::string flag = in.word(1);
  if (flag != "yes" && flag != "no") in.fail_at(1, "expected yes or no");
  AddressPool pool;
  if (flag == "yes") {
    for (long long i = 0; i < n; ++i) {
      in.require_next("a coordinate line");
      if (in.size() != 2) in.fail_at(std::min<std::size_t>(in.size(), 2), "coordinate lines have 2 fields");
      pool.x.push_back(in.real(0));
      pool.y.push_back(in.real(1));
    }
  }
  in.require_next("matrix");
  in.expect_key("matrix", 1);
  pool.travel = read_matrix(in, static_cast<int>(n));
  for (long long i = 0; i < n; ++i)
    if (pool.travel[static_cast<std::size_t>(i) * n + i] != 0) in.fail(1, "pool matrix diagonal must be zero");
  in.require_next("end");
  in.expect_key("end", 1);
  return pool;
}

AddressPool load_pool(const std::string& path) {
  auto f = open_in(path);
  return read_pool(f, path);
}

void write_results_header(std::ostream& os) { os << "instance,approach,strategy,scale,multiple,cost,gain\n"; }

void write_result_row(std::ostream& os, const ResultRow& row) {
  os << row.instance << ',' << row.approach << ',' << row.strategy << ',' << row.scale << ',' << row.multiple << ','
     << format_real(row.cost) << ',' << (row.gain ? format_real(*row.gain) : "") << '\n';
}

std::vector<ResultRow> read_results(std::istream& is, const std::string& source) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(is, line)) {
    ++line_no;
    if (!line.empty()) header = split(line);
  }
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int c_inst = column("instance"), c_app = column("approach"), c_strat = column("strategy"),
            c_scale = column("scale"), c_mult = column("multiple"), c_cost = column("cost"), c_gain = column("gain");
  if (c_inst < 0 || c_cost < 0 || (c_app < 0 && c_strat < 0))
    throw ParseError(source, line_no, 1, "results header needs instance, cost and approach or strategy columns");

  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError(source, line_no, 1, "expected " + std::to_string(header.size()) + " cells");
    auto num = [&](int c, auto parse) {
      try {
        return parse(cells[c]);
      } catch (...) {
        throw ParseError(source, line_no, c + 1, "bad number '" + cells[c] + "'");
      }
    };
    ResultRow r;
    r.instance = cells[c_inst];
    if (c_strat >= 0) r.strategy = cells[c_strat];
    if (c_scale >= 0) r.scale = num(c_scale, [](const std::string& s) { return std::stoi(s); });
    if (c_mult >= 0) r.multiple = num(c_mult, [](const std::string& s) { return std::stoi(s); });
    r.approach = c_app >= 0 ? cells[c_app]
                            : r.strategy + "-s" + std::to_string(r.scale) + "-w" + std::to_string(r.multiple);
    r.cost = num(c_cost, [](const std::string& s) { return std::stod(s); });
    if (c_gain >= 0 && !cells[c_gain].empty()) r.gain = num(c_gain, [](const std::string& s) { return std::stod(s); });
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ssvrp
