#include "cflab/channels.hpp"

#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "cflab/errors.hpp"

namespace cflab::channels {

namespace {

constexpr double kRowTol = 1e-9;

void check_rows(const std::vector<double>& t, std::size_t rows, std::size_t cols,
                const char* what) {
  if (t.size() != rows * cols)
    throw DimensionMismatch(std::string(what) + ": transition table has wrong size");
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      double v = t[r * cols + c];
      if (!(v >= 0.0) || std::isnan(v))
        throw InvalidSpec(std::string(what) + ": negative or NaN transition probability");
      s += v;
    }
    if (std::fabs(s - 1.0) > kRowTol)
      throw InvalidSpec(std::string(what) + ": transition row does not sum to 1");
  }
}

}  // namespace

void validate(const MacSpec& spec) {
  gf::check_prime(spec.q);
  if (spec.px1.size() != spec.q || spec.px2.size() != spec.q)
    throw DimensionMismatch("mac: input pmf size must equal q");
  if (spec.ny == 0) throw InvalidSpec("mac: output alphabet is empty");
  check_rows(spec.t, static_cast<std::size_t>(spec.q) * spec.q, spec.ny, "mac");
  if (spec.a1 % spec.q == 0 && spec.a2 % spec.q == 0)
    throw ZeroCoefficientVector("mac: both combination coefficients are zero");
  if (spec.a1 >= spec.q || spec.a2 >= spec.q)
    throw InvalidSpec("mac: combination coefficients must be reduced mod q");
}

prob::JointPmf build_mac_joint(const MacSpec& spec) {
  validate(spec);
  const std::size_t q = spec.q, ny = spec.ny;
  std::vector<prob::Axis> axes = {
      {"X1", q}, {"X2", q}, {"W", q}, {"Y", ny}};
  std::vector<double> cells(q * q * q * ny, 0.0);
  for (std::size_t x1 = 0; x1 < q; ++x1)
    for (std::size_t x2 = 0; x2 < q; ++x2) {
      std::uint32_t w = gf::add(gf::mul(spec.a1, static_cast<std::uint32_t>(x1), spec.q),
                                gf::mul(spec.a2, static_cast<std::uint32_t>(x2), spec.q),
                                spec.q);
      double px = spec.px1[x1] * spec.px2[x2];
      for (std::size_t y = 0; y < ny; ++y)
        cells[((x1 * q + x2) * q + w) * ny + y] = px * spec.p(x1, x2, y);
    }
  return prob::JointPmf(axes, cells);
}

bool check_markov_through_w(const MacSpec& spec, double tol) {
  validate(spec);
  const std::size_t q = spec.q;
  // Rows with equal w must be identical rows of p(y|.).
  std::vector<int> seen(q, -1);  // representative row index per w value
  for (std::size_t x1 = 0; x1 < q; ++x1)
    for (std::size_t x2 = 0; x2 < q; ++x2) {
      std::uint32_t w = gf::add(gf::mul(spec.a1, static_cast<std::uint32_t>(x1), spec.q),
                                gf::mul(spec.a2, static_cast<std::uint32_t>(x2), spec.q),
                                spec.q);
      std::size_t row = x1 * q + x2;
      if (seen[w] < 0) {
        seen[w] = static_cast<int>(row);
        continue;
      }
      std::size_t rep = static_cast<std::size_t>(seen[w]);
      for (std::size_t y = 0; y < spec.ny; ++y)
        if (std::fabs(spec.t[row * spec.ny + y] - spec.t[rep * spec.ny + y]) > tol)
          return false;
    }
  return true;
}

std::vector<double> virtualize(const std::vector<double>& raw, std::size_t ns1,
                               std::size_t ns2, std::size_t ny,
                               const std::vector<std::uint32_t>& phi1,
                               const std::vector<std::uint32_t>& phi2, std::uint32_t q) {
  gf::check_prime(q);
  check_rows(raw, ns1 * ns2, ny, "virtualize");
  if (phi1.size() != q || phi2.size() != q)
    throw DimensionMismatch("virtualize: symbol map size must equal q");
  for (auto s : phi1)
    if (s >= ns1) throw AlphabetMismatch("virtualize: phi1 maps outside raw alphabet");
  for (auto s : phi2)
    if (s >= ns2) throw AlphabetMismatch("virtualize: phi2 maps outside raw alphabet");
  std::vector<double> out(static_cast<std::size_t>(q) * q * ny);
  for (std::size_t v1 = 0; v1 < q; ++v1)
    for (std::size_t v2 = 0; v2 < q; ++v2)
      for (std::size_t y = 0; y < ny; ++y)
        out[(v1 * q + v2) * ny + y] = raw[(phi1[v1] * ns2 + phi2[v2]) * ny + y];
  return out;
}

std::vector<std::uint32_t> sample_mac(const MacSpec& spec, const gf::FieldVector& x1,
                                      const gf::FieldVector& x2, Rng& rng) {
  validate(spec);
  if (x1.q != spec.q || x2.q != spec.q)
    throw ModulusMismatch("sample_mac: codeword field does not match channel");
  if (x1.size() != x2.size())
    throw LengthMismatch("sample_mac: codewords have different lengths");
  const std::size_t n = x1.size();
  std::vector<std::uint32_t> y(n);
  std::vector<double> cdf(spec.ny);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t yy = 0; yy < spec.ny; ++yy) {
      acc += spec.p(x1.v[i], x2.v[i], yy);
      cdf[yy] = acc;
    }
    y[i] = static_cast<std::uint32_t>(rng.sample_cdf(cdf));
  }
  return y;
}

MacSpec make_additive_mac(std::uint32_t q, const prob::Pmf& px1, const prob::Pmf& px2,
                          const prob::Pmf& noise, std::uint32_t a1, std::uint32_t a2) {
  gf::check_prime(q);
  if (noise.size() != q) throw DimensionMismatch("additive mac: noise pmf size must equal q");
  MacSpec spec;
  spec.q = q;
  spec.px1 = px1;
  spec.px2 = px2;
  spec.ny = q;
  spec.a1 = a1 % q;
  spec.a2 = a2 % q;
  spec.t.assign(static_cast<std::size_t>(q) * q * q, 0.0);
  for (std::uint32_t x1 = 0; x1 < q; ++x1)
    for (std::uint32_t x2 = 0; x2 < q; ++x2) {
      std::uint32_t base = gf::add(x1, x2, q);
      for (std::uint32_t z = 0; z < q; ++z)
        spec.t[(static_cast<std::size_t>(x1) * q + x2) * q + gf::add(base, z, q)] = noise[z];
    }
  validate(spec);
  return spec;
}

namespace {

std::vector<double> json_doubles(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw SchemaError(std::string("channel json: missing array field '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw SchemaError(std::string("channel json: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

MacSpec mac_spec_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("channel json: parse failure: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("channel json: top level must be an object");
  for (const char* key : {"q", "px1", "px2", "transition", "a"})
    if (!j.contains(key)) throw SchemaError(std::string("channel json: missing field '") + key + "'");

  MacSpec spec;
  if (!j.at("q").is_number_unsigned()) throw SchemaError("channel json: 'q' must be a positive integer");
  spec.q = j.at("q").get<std::uint32_t>();
  spec.px1 = prob::Pmf(json_doubles(j, "px1"));
  spec.px2 = prob::Pmf(json_doubles(j, "px2"));

  const auto& a = j.at("a");
  if (!a.is_array() || a.size() != 2 || !a[0].is_number_unsigned() || !a[1].is_number_unsigned())
    throw SchemaError("channel json: 'a' must be a pair of nonnegative integers");
  spec.a1 = a[0].get<std::uint32_t>();
  spec.a2 = a[1].get<std::uint32_t>();

  const auto& t = j.at("transition");
  if (!t.is_array() || t.size() != static_cast<std::size_t>(spec.q) * spec.q)
    throw SchemaError("channel json: 'transition' must hold q*q rows");
  std::size_t ny = 0;
  for (const auto& row : t) {
    if (!row.is_array() || row.empty())
      throw SchemaError("channel json: each transition row must be a nonempty array");
    if (ny == 0) ny = row.size();
    if (row.size() != ny) throw SchemaError("channel json: ragged transition rows");
    for (const auto& v : row) {
      if (!v.is_number()) throw SchemaError("channel json: non-numeric transition entry");
      spec.t.push_back(v.get<double>());
    }
  }
  spec.ny = ny;
  validate(spec);
  return spec;
}

std::string mac_spec_to_json_text(const MacSpec& spec) {
  validate(spec);
  nlohmann::json j;
  j["q"] = spec.q;
  j["px1"] = spec.px1.data();
  j["px2"] = spec.px2.data();
  j["a"] = {spec.a1, spec.a2};
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < static_cast<std::size_t>(spec.q) * spec.q; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t y = 0; y < spec.ny; ++y) row.push_back(spec.t[r * spec.ny + y]);
    rows.push_back(std::move(row));
  }
  j["transition"] = std::move(rows);
  return j.dump(2) + "\n";
}

void validate(const BcSpec& spec) {
  if (spec.nu1 == 0 || spec.nu2 == 0 || spec.nx == 0 || spec.ny1 == 0 || spec.ny2 == 0)
    throw InvalidSpec("bc: empty alphabet");
  if (spec.pu.size() != spec.nu1 * spec.nu2)
    throw DimensionMismatch("bc: auxiliary pmf has wrong size");
  double s = 0.0;
  for (double v : spec.pu) {
    if (!(v >= 0.0) || std::isnan(v)) throw InvalidPmf("bc: negative or NaN auxiliary probability");
    s += v;
  }
  if (std::fabs(s - 1.0) > kRowTol) throw InvalidPmf("bc: auxiliary pmf does not sum to 1");
  if (spec.xmap.size() != spec.nu1 * spec.nu2)
    throw DimensionMismatch("bc: symbol map has wrong size");
  for (auto x : spec.xmap)
    if (x >= spec.nx) throw AlphabetMismatch("bc: symbol map leaves the input alphabet");
  check_rows(spec.t, spec.nx, spec.ny1 * spec.ny2, "bc");
}

prob::JointPmf build_bc_joint(const BcSpec& spec) {
  validate(spec);
  std::vector<prob::Axis> axes = {
      {"U1", spec.nu1}, {"U2", spec.nu2}, {"Y1", spec.ny1}, {"Y2", spec.ny2}};
  std::vector<double> cells(spec.nu1 * spec.nu2 * spec.ny1 * spec.ny2, 0.0);
  for (std::size_t u1 = 0; u1 < spec.nu1; ++u1)
    for (std::size_t u2 = 0; u2 < spec.nu2; ++u2) {
      double p = spec.pu_at(u1, u2);
      std::uint32_t x = spec.x_of(u1, u2);
      for (std::size_t y1 = 0; y1 < spec.ny1; ++y1)
        for (std::size_t y2 = 0; y2 < spec.ny2; ++y2)
          cells[((u1 * spec.nu2 + u2) * spec.ny1 + y1) * spec.ny2 + y2] =
              p * spec.p(x, y1, y2);
    }
  return prob::JointPmf(axes, cells);
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> sample_bc(
    const BcSpec& spec, const std::vector<std::uint32_t>& u1,
    const std::vector<std::uint32_t>& u2, Rng& rng) {
  validate(spec);
  if (u1.size() != u2.size()) throw LengthMismatch("sample_bc: auxiliary sequences differ in length");
  const std::size_t n = u1.size();
  std::vector<std::uint32_t> y1(n), y2(n);
  std::vector<double> cdf(spec.ny1 * spec.ny2);
  for (std::size_t i = 0; i < n; ++i) {
    if (u1[i] >= spec.nu1 || u2[i] >= spec.nu2)
      throw AlphabetMismatch("sample_bc: auxiliary symbol out of range");
    std::uint32_t x = spec.x_of(u1[i], u2[i]);
    double acc = 0.0;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
      acc += spec.t[x * cdf.size() + k];
      cdf[k] = acc;
    }
    std::size_t pick = rng.sample_cdf(cdf);
    y1[i] = static_cast<std::uint32_t>(pick / spec.ny2);
    y2[i] = static_cast<std::uint32_t>(pick % spec.ny2);
  }
  return {std::move(y1), std::move(y2)};
}

BcSpec make_orthogonal_bc(std::size_t nu1, std::size_t nu2, const std::vector<double>& pu,
                          const std::vector<double>& t1, std::size_t ny1,
                          const std::vector<double>& t2, std::size_t ny2) {
  check_rows(t1, nu1, ny1, "orthogonal bc (t1)");
  check_rows(t2, nu2, ny2, "orthogonal bc (t2)");
  BcSpec spec;
  spec.nu1 = nu1;
  spec.nu2 = nu2;
  spec.nx = nu1 * nu2;  // x carries the pair verbatim
  spec.ny1 = ny1;
  spec.ny2 = ny2;
  spec.pu = pu;
  spec.xmap.resize(nu1 * nu2);
  for (std::size_t u1 = 0; u1 < nu1; ++u1)
    for (std::size_t u2 = 0; u2 < nu2; ++u2)
      spec.xmap[u1 * nu2 + u2] = static_cast<std::uint32_t>(u1 * nu2 + u2);
  spec.t.assign(spec.nx * ny1 * ny2, 0.0);
  for (std::size_t u1 = 0; u1 < nu1; ++u1)
    for (std::size_t u2 = 0; u2 < nu2; ++u2) {
      std::size_t x = u1 * nu2 + u2;
      for (std::size_t y1 = 0; y1 < ny1; ++y1)
        for (std::size_t y2 = 0; y2 < ny2; ++y2)
          spec.t[(x * ny1 + y1) * ny2 + y2] = t1[u1 * ny1 + y1] * t2[u2 * ny2 + y2];
    }
  validate(spec);
  return spec;
}

BcSpec bc_spec_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("channel json: parse failure: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("channel json: top level must be an object");
  for (const char* key : {"nu1", "nu2", "nx", "ny1", "ny2", "pu", "xmap", "transition"})
    if (!j.contains(key)) throw SchemaError(std::string("channel json: missing field '") + key + "'");
  BcSpec spec;
  auto usize = [&](const char* key) -> std::size_t {
    if (!j.at(key).is_number_unsigned())
      throw SchemaError(std::string("channel json: '") + key + "' must be a positive integer");
    return j.at(key).get<std::size_t>();
  };
  spec.nu1 = usize("nu1");
  spec.nu2 = usize("nu2");
  spec.nx = usize("nx");
  spec.ny1 = usize("ny1");
  spec.ny2 = usize("ny2");
  spec.pu = json_doubles(j, "pu");
  if (!j.at("xmap").is_array()) throw SchemaError("channel json: 'xmap' must be an array");
  for (const auto& v : j.at("xmap")) {
    if (!v.is_number_unsigned()) throw SchemaError("channel json: 'xmap' entries must be nonnegative integers");
    spec.xmap.push_back(v.get<std::uint32_t>());
  }
  spec.t = json_doubles(j, "transition");
  validate(spec);
  return spec;
}

std::string bc_spec_to_json_text(const BcSpec& spec) {
  validate(spec);
  nlohmann::json j;
  j["nu1"] = spec.nu1;
  j["nu2"] = spec.nu2;
  j["nx"] = spec.nx;
  j["ny1"] = spec.ny1;
  j["ny2"] = spec.ny2;
  j["pu"] = spec.pu;
  j["xmap"] = spec.xmap;
  j["transition"] = spec.t;
  return j.dump(2) + "\n";
}

}  // namespace cflab::channels
