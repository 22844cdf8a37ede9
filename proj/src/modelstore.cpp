///////////////////////////////////////////////////////////////////////
// File:        modelstore.cpp
// Description: Versioned binary model files (.ocrm).
//
// (C) Copyright 2026, The ocrtl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
///////////////////////////////////////////////////////////////////////

#include "modelstore.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <tuple>

namespace ocrtl {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little,
              "model payload writer assumes a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i]))
         << (8 * i);
  }
  return v;
}

constexpr std::size_t kPreambleBytes = 12;

json build_header(const Network& net) {
  json header;
  header["format"] = "ocrm";
  header["version"] = kModelFormatVersion;
  header["input_height"] = net.input_height;
  header["hidden_size"] = net.hidden_size;
  json symbols = json::array();
  for (char32_t c : net.codec.symbols()) symbols.push_back(static_cast<std::uint32_t>(c));
  json immune = json::array();
  for (char32_t c : net.codec.immune()) immune.push_back(static_cast<std::uint32_t>(c));
  header["codec"] = {{"symbols", symbols}, {"immune", immune}};
  json blocks = json::array();
  std::size_t floats = 0;
  net.params.for_each([&](std::string_view name, const auto& m) {
    blocks.push_back({{"name", std::string(name)},
                      {"rows", m.rows()},
                      {"cols", m.cols()}});
    floats += static_cast<std::size_t>(m.size());
  });
  header["blocks"] = blocks;
  header["seed_lineage"] = net.seed_lineage;
  header["provenance"] = net.provenance;
  header["payload_bytes"] = floats * sizeof(float);
  return header;
}

}  // namespace

std::string serialize_model(const Network& net) {
  json header = build_header(net);
  // The offset is part of the header, so iterate until its width settles.
  std::size_t offset = 0;
  std::string text;
  for (int i = 0; i < 4; ++i) {
    header["payload_offset"] = offset;
    text = header.dump(2);
    const std::size_t next = kPreambleBytes + text.size();
    if (next == offset) break;
    offset = next;
  }

  std::string out(kModelMagic, sizeof kModelMagic);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  net.params.for_each([&](std::string_view, const auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const float f = static_cast<float>(m(r, c));
        char bytes[sizeof f];
        std::memcpy(bytes, &f, sizeof f);
        out.append(bytes, sizeof f);
      }
    }
  });
  return out;
}

Network deserialize_model(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw ModelFormatError(ModelFormatIssue::kBadMagic,
                           "not an OCRM model file (bad magic)");
  }
  if (bytes.size() < kPreambleBytes) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           "model file truncated inside the preamble");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kModelFormatVersion) {
    throw ModelFormatError(ModelFormatIssue::kUnsupportedVersion,
                           "unsupported model format version " +
                               std::to_string(version) + " (expected " +
                               std::to_string(kModelFormatVersion) + ")");
  }
  const std::size_t header_len = get_u32(bytes, 8);
  if (bytes.size() < kPreambleBytes + header_len) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           "model file truncated inside the header");
  }

  Network net;
  std::size_t payload_offset = 0, payload_bytes = 0;
  std::vector<std::tuple<std::string, Eigen::Index, Eigen::Index>> declared;
  std::vector<char32_t> symbols;
  CharSet immune;
  try {
    const json header =
        json::parse(bytes.begin() + kPreambleBytes,
                    bytes.begin() + static_cast<std::ptrdiff_t>(
                                        kPreambleBytes + header_len));
    net.input_height = header.at("input_height").get<int>();
    net.hidden_size = header.at("hidden_size").get<int>();
    for (const auto& cp : header.at("codec").at("symbols")) {
      symbols.push_back(static_cast<char32_t>(cp.get<std::uint32_t>()));
    }
    for (const auto& cp : header.at("codec").at("immune")) {
      immune.insert(static_cast<char32_t>(cp.get<std::uint32_t>()));
    }
    for (const auto& b : header.at("blocks")) {
      declared.emplace_back(b.at("name").get<std::string>(),
                            b.at("rows").get<Eigen::Index>(),
                            b.at("cols").get<Eigen::Index>());
    }
    net.seed_lineage = header.at("seed_lineage").get<std::vector<std::uint64_t>>();
    net.provenance =
        header.value("provenance", json::object())
            .get<std::map<std::string, std::string>>();
    payload_offset = header.at("payload_offset").get<std::size_t>();
    payload_bytes = header.at("payload_bytes").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           std::string("malformed model header: ") + e.what());
  }
  if (net.hidden_size < 2 || net.hidden_size % 2 != 0 || net.input_height < 1) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           "model header declares invalid dimensions");
  }
  try {
    net.codec = Codec::from_symbols(std::move(symbols), std::move(immune));
  } catch (const Error& e) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           std::string("invalid codec in model header: ") +
                               e.what());
  }

  // Expected layout for the declared dimensions.
  const int units = net.hidden_size / 2;
  const auto c = static_cast<Eigen::Index>(net.codec.size());
  net.params.forward = {Eigen::MatrixXd(4 * units, net.input_height),
                        Eigen::MatrixXd(4 * units, units),
                        Eigen::VectorXd(4 * units)};
  net.params.backward = net.params.forward;
  const auto output_it = std::find_if(declared.begin(), declared.end(), [](const auto& d) {
    return std::get<0>(d) == "output.weights";
  });
  if (output_it != declared.end() && std::get<1>(*output_it) != c) {
    throw ModelFormatError(
        ModelFormatIssue::kCodecMismatch,
        "codec has " + std::to_string(c) + " symbols but the output matrix has " +
            std::to_string(std::get<1>(*output_it)) + " rows");
  }
  net.params.output = Eigen::MatrixXd(c, net.hidden_size);
  net.params.output_bias = Eigen::VectorXd(c);

  std::size_t block = 0, floats = 0;
  bool shapes_ok = true;
  net.params.for_each([&](std::string_view name, auto& m) {
    if (block >= declared.size() || std::get<0>(declared[block]) != name ||
        std::get<1>(declared[block]) != m.rows() ||
        std::get<2>(declared[block]) != m.cols()) {
      shapes_ok = false;
    }
    ++block;
    floats += static_cast<std::size_t>(m.size());
  });
  if (!shapes_ok || block != declared.size()) {
    throw ModelFormatError(ModelFormatIssue::kPayloadMismatch,
                           "declared parameter blocks do not match the model "
                           "dimensions");
  }
  if (payload_bytes != floats * sizeof(float) ||
      payload_offset != kPreambleBytes + header_len ||
      bytes.size() != payload_offset + payload_bytes) {
    throw ModelFormatError(
        ModelFormatIssue::kPayloadMismatch,
        "payload holds " +
            std::to_string(bytes.size() > payload_offset ? bytes.size() - payload_offset : 0) +
            " bytes but the declared shapes need " +
            std::to_string(floats * sizeof(float)));
  }

  std::size_t at = payload_offset;
  net.params.for_each([&](std::string_view, auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        float f;
        std::memcpy(&f, bytes.data() + at, sizeof f);
        at += sizeof f;
        m(r, col) = static_cast<double>(f);
      }
    }
  });
  if (!net.params.all_finite()) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           "model payload contains non-finite values");
  }
  return net;
}

void save_model(const Network& net, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(net);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write model " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "failed writing model " + path.string());
}

namespace {
std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}
}  // namespace

Network load_model(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  try {
    return deserialize_model(bytes);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(e.issue(), path.string() + ": " + e.what());
  }
}

std::string read_model_header(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() < kPreambleBytes ||
      std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw ModelFormatError(ModelFormatIssue::kBadMagic,
                           path.string() + ": not an OCRM model file");
  }
  const std::size_t header_len = get_u32(bytes, 8);
  if (bytes.size() < kPreambleBytes + header_len) {
    throw ModelFormatError(ModelFormatIssue::kMalformedHeader,
                           path.string() + ": truncated header");
  }
  return bytes.substr(kPreambleBytes, header_len);
}

}  // namespace ocrtl
