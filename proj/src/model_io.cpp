#include "spmf/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "spmf/atomic_file.hpp"
#include "spmf/errors.hpp"

namespace spmf {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "spmf-model";

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void put_le(std::string& out, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return std::bit_cast<double>(bits);
}

std::string flags(const std::vector<char>& v, std::size_t n) {
  if (v.empty()) return std::string(n, '1');
  std::string s(n, '0');
  for (std::size_t k = 0; k < n; ++k) s[k] = v[k] ? '1' : '0';
  return s;
}

std::vector<char> unflag(const std::string& s, std::size_t n) {
  if (s.size() != n) throw ModelFormatError("known-entity flags do not match the model shape");
  std::vector<char> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = s[k] == '1' ? 1 : 0;
  return v;
}

json to_json(const Hyperparams& h) {
  return json{{"lambda_u", h.lambda_u},
              {"lambda_v", h.lambda_v},
              {"lambda_t", h.lambda_t},
              {"alpha", h.alpha},
              {"learning_rate", h.learning_rate},
              {"epochs", h.epochs},
              {"k", h.k},
              {"seed", h.seed},
              {"init_sigma", h.init_sigma},
              {"clamp_predictions", h.clamp_predictions},
              {"normalize_influence_rows", h.normalize_influence_rows}};
}

Hyperparams hyperparams_from(const json& j) {
  Hyperparams h;
  h.lambda_u = j.at("lambda_u").get<double>();
  h.lambda_v = j.at("lambda_v").get<double>();
  h.lambda_t = j.at("lambda_t").get<double>();
  h.alpha = j.at("alpha").get<double>();
  h.learning_rate = j.at("learning_rate").get<double>();
  h.epochs = j.at("epochs").get<int>();
  h.k = j.at("k").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.init_sigma = j.at("init_sigma").get<double>();
  h.clamp_predictions = j.at("clamp_predictions").get<bool>();
  h.normalize_influence_rows = j.at("normalize_influence_rows").get<bool>();
  return h;
}

}  // namespace

void save_model(const FactorModel& model, const Hyperparams& h, const std::filesystem::path& path) {
  if (!model.user_ids || !model.item_ids) throw ParameterError("model has no id maps to persist");
  const auto m = model.num_users();
  const auto n = model.num_items();
  if (model.user_ids->size() != m || model.item_ids->size() != n || model.items.cols() != model.users.cols()) {
    throw ParameterError("model shape does not match its id maps");
  }

  std::string payload;
  payload.reserve((m + n) * static_cast<std::size_t>(model.k()) * 8);
  for (Eigen::Index r = 0; r < model.users.rows(); ++r)
    for (Eigen::Index c = 0; c < model.users.cols(); ++c) put_le(payload, model.users(r, c));
  for (Eigen::Index r = 0; r < model.items.rows(); ++r)
    for (Eigen::Index c = 0; c < model.items.cols(); ++c) put_le(payload, model.items(r, c));

  json header{{"format", kFormatName},
              {"version", kModelFormatVersion},
              {"m", m},
              {"n", n},
              {"k", model.k()},
              {"hyperparams", to_json(h)},
              {"global_mean", model.global_mean},
              {"users", model.user_ids->names()},
              {"items", model.item_ids->names()},
              {"known_users", flags(model.known_users, m)},
              {"known_items", flags(model.known_items, n)},
              {"payload_bytes", payload.size()},
              {"checksum", "fnv1a64:" + hex64(fnv1a(payload))}};
  write_file_atomic(path, header.dump() + "\n" + payload);
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());

  const auto newline = blob.find('\n');
  if (newline == std::string::npos) throw ModelFormatError("model header is truncated");
  json header;
  try {
    header = json::parse(blob.substr(0, newline));
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("model header is not valid JSON: ") + e.what());
  }

  try {
    if (header.at("format").get<std::string>() != kFormatName) throw ModelFormatError("not an spmf model file");
    const int version = header.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelFormatError("unsupported model format version " + std::to_string(version) + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");
    }
    const auto m = header.at("m").get<std::size_t>();
    const auto n = header.at("n").get<std::size_t>();
    const auto k = header.at("k").get<int>();
    const auto expected = (m + n) * static_cast<std::size_t>(k) * 8;
    const std::string_view payload = std::string_view(blob).substr(newline + 1);
    if (header.at("payload_bytes").get<std::size_t>() != expected) {
      throw ModelFormatError("payload size in header does not match the model shape");
    }
    if (payload.size() < expected) throw ModelFormatError("model payload is truncated");
    if (payload.size() > expected) throw ModelFormatError("trailing bytes after model payload");
    if (header.at("checksum").get<std::string>() != "fnv1a64:" + hex64(fnv1a(payload))) {
      throw ModelFormatError("model checksum mismatch");
    }

    SavedModel saved;
    saved.hyperparams = hyperparams_from(header.at("hyperparams"));
    FactorModel& model = saved.model;
    model.user_ids = std::make_shared<IdMap>(header.at("users").get<std::vector<std::string>>());
    model.item_ids = std::make_shared<IdMap>(header.at("items").get<std::vector<std::string>>());
    if (model.user_ids->size() != m || model.item_ids->size() != n) {
      throw ModelFormatError("id maps do not match the model shape");
    }
    model.known_users = unflag(header.at("known_users").get<std::string>(), m);
    model.known_items = unflag(header.at("known_items").get<std::string>(), n);
    model.global_mean = header.at("global_mean").get<double>();
    model.users.resize(static_cast<Eigen::Index>(m), k);
    model.items.resize(static_cast<Eigen::Index>(n), k);
    const char* p = payload.data();
    for (Eigen::Index r = 0; r < model.users.rows(); ++r)
      for (Eigen::Index c = 0; c < k; ++c, p += 8) model.users(r, c) = get_le(p);
    for (Eigen::Index r = 0; r < model.items.rows(); ++r)
      for (Eigen::Index c = 0; c < k; ++c, p += 8) model.items(r, c) = get_le(p);
    return saved;
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("malformed model header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("malformed model header: ") + e.what());
  }
}

}  // namespace spmf
