#include "gcmg/signal.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gcmg/errors.hpp"
#include "gcmg/linalg.hpp"

namespace gcmg {

namespace {

// rolling AR step over a state vector holding the last p values, most recent last
double ar_step(const std::vector<double>& coeffs, const std::vector<double>& state,
               double noise) {
  double y = noise;
  const std::size_t p = coeffs.size();
  for (std::size_t i = 0; i < p; ++i) y += coeffs[i] * state[p - 1 - i];
  return y;
}

void push_state(std::vector<double>& state, double y) {
  if (state.empty()) return;
  std::rotate(state.begin(), state.begin() + 1, state.end());
  state.back() = y;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, delim)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == delim) fields.push_back("");
  return fields;
}

}  // namespace

std::vector<double> ar_generate(const ArProcess& p, std::size_t n, Rng& rng,
                                std::size_t burn_in) {
  if (p.noise_sd < 0) throw ConfigError("ar_generate: noise_sd must be >= 0");
  const std::size_t order = p.coeffs.size();
  if (!p.init_state.empty() && p.init_state.size() != order)
    throw ConfigError("ar_generate: init_state length must equal the order");

  std::vector<double> state =
      p.init_state.empty() ? std::vector<double>(order, 0.0) : p.init_state;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    const double y = ar_step(p.coeffs, state, p.noise_sd * rng.gaussian());
    push_state(state, y);
    if (t >= burn_in) out.push_back(y);
  }
  return out;
}

bool ar_is_stable(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw ConfigError("ar_is_stable: order must be >= 1");
  return max_root_modulus(coeffs) < 1.0;
}

std::vector<double> regime_switch_series(const ArProcess& first,
                                         const ArProcess& second,
                                         std::size_t n, std::size_t switch_at,
                                         Rng& rng) {
  if (switch_at > n)
    throw ConfigError("regime_switch_series: switch point beyond series end");
  std::vector<double> out = ar_generate(first, switch_at, rng);

  // hand the second process the tail of the first so the series is continuous
  ArProcess cont = second;
  const std::size_t p2 = second.coeffs.size();
  cont.init_state.assign(p2, 0.0);
  for (std::size_t i = 0; i < std::min(p2, out.size()); ++i)
    cont.init_state[p2 - 1 - i] = out[out.size() - 1 - i];

  std::vector<double> tail = ar_generate(cont, n - switch_at, rng);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

ReturnSeries load_prices(const std::string& path, const std::string& column,
                         char delimiter) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open price file: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw DataError(path + ": empty file (header row required)");
  const auto header = split_line(line, delimiter);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) col = i;
  if (col == header.size())
    throw DataError(path + ": no column named '" + column + "' in header");

  std::vector<double> prices;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line, delimiter);
    const std::string where = path + ": line " + std::to_string(line_no);
    if (col >= fields.size() || fields[col].empty())
      throw DataError(where + ": missing price");
    const std::string& cell = fields[col];
    double value = 0;
    const auto res =
        std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      throw DataError(where + ": cannot parse price '" + cell + "'");
    if (!(value > 0))
      throw DataError(where + ": non-positive price '" + cell + "'");
    prices.push_back(value);
  }
  if (prices.size() < 2)
    throw DataError(path + ": need at least 2 prices to form returns, got " +
                    std::to_string(prices.size()));

  ReturnSeries rs;
  rs.returns = simple_returns(prices);
  rs.signs = sign_series(rs.returns);
  rs.instrument = column;
  rs.note = path + " (" + std::to_string(prices.size()) + " prices)";
  return rs;
}

std::vector<double> simple_returns(const std::vector<double>& prices) {
  if (prices.size() < 2)
    throw DataError("simple_returns: need at least 2 prices");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0))
      throw DataError("simple_returns: non-positive price at index " +
                      std::to_string(i));
  }
  std::vector<double> r(prices.size() - 1);
  for (std::size_t t = 1; t < prices.size(); ++t)
    r[t - 1] = prices[t] / prices[t - 1] - 1.0;
  return r;
}

std::vector<int> sign_series(const std::vector<double>& values) {
  std::vector<int> s(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    s[i] = values[i] > 0 ? 1 : (values[i] < 0 ? -1 : 0);
  return s;
}

}  // namespace gcmg
