#include "mea/app/snapshot.hpp"

#include <cmath>
#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "mea/errors.hpp"

namespace mea::app {

namespace {

constexpr char kMagic[8] = {'M', 'E', 'A', 'S', 'N', 'A', 'P', '1'};

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t y = 0;
  for (int i = 0; i < 8; ++i) y = (y << 8) | ((x >> (8 * i)) & 0xffu);
  return y;
}

void put_u64(std::ostream& out, std::uint64_t x) {
  x = to_little(x);
  char b[8];
  std::memcpy(b, &x, 8);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  char b[8];
  in.read(b, 8);
  std::uint64_t x = 0;
  std::memcpy(&x, b, 8);
  return to_little(x);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  nlohmann::ordered_json h;
  h["format"] = "mea-snapshot/1";
  h["system"] = snap.system;
  h["truncation"] = {{snap.truncation_name, snap.truncation}};
  h["time"] = snap.time;
  h["endianness"] = "little";
  h["dtype"] = "f64";
  h["layout"] = snap.layout;
  h["quantity"] = snap.quantity;
  h["count"] = snap.data.size();
  // JSON has no inf or nan; a non-finite parameter (the energy of a nearly
  // blown-up state, say) is left out rather than written as null.
  h["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : snap.parameters)
    if (std::isfinite(v)) h["parameters"][k] = v;
  const std::string header = h.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open snapshot for writing: " + path.string());
  out.write(kMagic, 8);
  put_u64(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (double x : snap.data) put_u64(out, std::bit_cast<std::uint64_t>(x));
  out.flush();
  if (!out) throw IoError("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path.string());
  char magic[8] = {};
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw IoError("not a snapshot file (bad magic): " + path.string());
  const std::uint64_t hlen = get_u64(in);
  if (!in || hlen > (1u << 24)) throw IoError("corrupt snapshot header length: " + path.string());
  std::string header(hlen, '\0');
  in.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw IoError("truncated snapshot header: " + path.string());

  Snapshot s;
  std::uint64_t count = 0;
  try {
    const auto h = nlohmann::json::parse(header);
    if (h.at("format") != "mea-snapshot/1") throw IoError("unsupported snapshot format in " + path.string());
    if (h.at("endianness") != "little" || h.at("dtype") != "f64")
      throw IoError("snapshot payload must be little-endian f64: " + path.string());
    s.system = h.at("system").get<std::string>();
    const auto& tr = h.at("truncation");
    if (!tr.is_object() || tr.size() != 1) throw IoError("malformed truncation in " + path.string());
    s.truncation_name = tr.begin().key();
    s.truncation = tr.begin().value().get<long long>();
    s.time = h.at("time").get<double>();
    s.layout = h.at("layout").get<std::string>();
    s.quantity = h.at("quantity").get<std::string>();
    s.parameters = h.at("parameters").get<std::map<std::string, double>>();
    count = h.at("count").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed snapshot header in " + path.string() + ": " + e.what());
  }

  const auto payload_start = in.tellg();
  in.seekg(0, std::ios::end);
  const auto payload = static_cast<std::uint64_t>(in.tellg() - payload_start);
  if (payload != count * 8)
    throw IoError("snapshot payload has " + std::to_string(payload) + " bytes but the header declares " +
                  std::to_string(count) + " values: " + path.string());
  in.seekg(payload_start);
  s.data.resize(count);
  for (auto& x : s.data) x = std::bit_cast<double>(get_u64(in));
  if (!in) throw IoError("truncated snapshot payload: " + path.string());
  return s;
}

}  // namespace mea::app
