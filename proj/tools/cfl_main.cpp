// Copyright 2026 The cfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: RD sweeps, DC error analysis, block traces and a
// standalone encoder/decoder.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cfl/cfl.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::vector<std::string> inputs;
  std::vector<int> quantizers = {20, 32, 43, 55};
  int q_index = 32;
  std::string cfl = "both";
  double lambda_const = 0.057;
  std::string rate_model = "param-only";
  int jobs = std::max(1u, std::thread::hardware_concurrency());
  uint64_t seed = 1;
  std::string out;
  std::string format;
  int block_size = 8;
  int synthetic = 0;
  int synthetic_size = 256;
  std::string bd_method = "pchip";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void AddInput(CLI::App* cmd, Options& o) {
  cmd->add_option("-i,--input", o.inputs, "Image files (.ppm, .y4m) or directories")
      ->envname("CFL_INPUT");
}

void AddFormat(CLI::App* cmd, Options& o, const std::string& def) {
  o.format = def;
  cmd->add_option("--format", o.format, "Chroma format the inputs are coded at")
      ->check(CLI::IsMember({"420", "422", "440", "444"}))
      ->envname("CFL_FORMAT")
      ->capture_default_str();
}

void AddSynthetic(CLI::App* cmd, Options& o) {
  cmd->add_option("--synthetic", o.synthetic,
                  "Add N generated frames with per-block affine chroma")
      ->check(CLI::NonNegativeNumber)
      ->envname("CFL_SYNTHETIC");
  cmd->add_option("--synthetic-size", o.synthetic_size, "Width and height of generated frames")
      ->check(CLI::Range(8, 4096))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for generated content")
      ->envname("CFL_SEED")
      ->capture_default_str();
}

void AddEncoderOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--lambda-const", o.lambda_const, "lambda = c * step^2")
      ->check(CLI::NonNegativeNumber)
      ->envname("CFL_LAMBDA_CONST")
      ->capture_default_str();
  cmd->add_option("--rate-model", o.rate_model, "Rate used to rank CfL candidates")
      ->check(CLI::IsMember({"param-only", "full"}))
      ->envname("CFL_RATE_MODEL")
      ->capture_default_str();
  cmd->add_option("--block-size", o.block_size, "Chroma block size")
      ->check(CLI::IsMember({4, 8, 16, 32}))
      ->envname("CFL_BLOCK_SIZE")
      ->capture_default_str();
}

void AddOut(CLI::App* cmd, Options& o, const std::string& def, const std::string& help) {
  o.out = def;
  cmd->add_option("-o,--out", o.out, help)->envname("CFL_OUT")->capture_default_str();
}

cfl::ChromaFormat Format(const Options& o) { return cfl::ChromaFormat::FromName(o.format); }

cfl::EncoderConfig EncoderFrom(const Options& o) {
  cfl::EncoderConfig cfg;
  cfg.lambda_const = o.lambda_const;
  cfg.rate_model = cfl::ParseRateModel(o.rate_model);
  cfg.block_size = o.block_size;
  cfg.cfl_enabled = o.cfl != "off";
  return cfg;
}

std::vector<cfl::SweepImage> Images(const Options& o) {
  std::vector<cfl::SweepImage> images;
  if (o.inputs.empty() && o.synthetic == 0) {
    throw UsageError("no input: give --input or --synthetic");
  }
  if (!o.inputs.empty()) images = cfl::LoadInputs(o.inputs, Format(o));
  for (int k = 0; k < o.synthetic; ++k) {
    images.push_back({"synthetic-" + std::to_string(k),
                      cfl::MakeAffineChromaFrame(o.synthetic_size, o.synthetic_size, Format(o),
                                                 cfl::BitDepth::FromBits(8), o.block_size,
                                                 o.seed + k)});
  }
  return images;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) cfl::Fail(cfl::ErrorCode::kIoError, "cannot write " + path.string());
}

std::filesystem::path OutDir(const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) cfl::Fail(cfl::ErrorCode::kIoError, "cannot create " + o.out);
  return o.out;
}

int CmdEval(const Options& o) {
  if (o.quantizers.empty()) throw UsageError("empty quantizer list");
  cfl::SweepConfig cfg;
  cfg.quantizers = o.quantizers;
  cfg.encoder = EncoderFrom(o);
  cfg.jobs = o.jobs;
  cfg.cfl_settings = o.cfl == "both" ? std::vector<bool>{false, true}
                                     : std::vector<bool>{o.cfl == "on"};
  const auto images = Images(o);
  const auto points = cfl::RunSweep(images, cfg);
  std::vector<cfl::BdRow> rows;
  if (o.cfl == "both") {
    rows = cfl::BdTable(points, o.bd_method == "cubic" ? cfl::BdMethod::kCubicFit
                                                       : cfl::BdMethod::kPchip);
  }
  const auto dir = OutDir(o);
  WriteText(dir / "rd.csv", cfl::RdCsv(points));
  if (!rows.empty()) WriteText(dir / "bd.csv", cfl::BdCsv(rows));
  WriteText(dir / "eval.json", cfl::SweepJson(points, rows).dump(2) + "\n");
  std::cout << images.size() << " image(s), " << points.size() << " RD points\n";
  if (!rows.empty()) std::cout << cfl::BdTableText(rows);
  return kExitOk;
}

int CmdAnalyzeDc(const Options& o) {
  std::vector<cfl::Frame> frames;
  for (auto& img : Images(o)) frames.push_back(std::move(img.frame));
  const auto stats = cfl::DcErrorAnalysis(frames);
  const std::string csv = cfl::DcErrorCsv(stats);
  const auto dir = OutDir(o);
  WriteText(dir / "dc_error.csv", csv);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& s : stats) {
    j.push_back({{"size", s.size},
                 {"count", s.count},
                 {"q1", s.q1},
                 {"median", s.median},
                 {"q3", s.q3},
                 {"lo_whisker", s.lo_whisker},
                 {"hi_whisker", s.hi_whisker}});
  }
  WriteText(dir / "dc_error.json", j.dump(2) + "\n");
  std::cout << csv;
  return kExitOk;
}

int CmdDumpBlocks(const Options& o) {
  if (o.cfl == "both") throw UsageError("dump-blocks takes --cfl on or off");
  const cfl::EncoderConfig cfg = EncoderFrom(o);
  std::string csv = std::string("image,q_index,") + cfl::kTraceCsvHeader + "\n";
  size_t cfl_count = 0, total = 0;
  for (const auto& img : Images(o)) {
    const auto enc = cfl::EncodeFrame(img.frame, {o.q_index}, cfg);
    const std::string rows = cfl::TraceCsv(enc.traces);
    const std::string prefix = img.name + "," + std::to_string(o.q_index) + ",";
    for (size_t pos = rows.find('\n') + 1; pos < rows.size();) {
      const size_t end = rows.find('\n', pos);
      csv += prefix + rows.substr(pos, end - pos + 1);
      pos = end + 1;
    }
    cfl_count += enc.stats.cfl_blocks;
    total += enc.traces.size();
  }
  WriteText(OutDir(o) / "blocks.csv", csv);
  std::cout << "cfl blocks: " << cfl_count << " / " << total << "\n";
  return kExitOk;
}

int CmdEncode(const Options& o) {
  if (o.cfl == "both") throw UsageError("encode takes --cfl on or off");
  const auto images = Images(o);
  if (images.size() != 1) throw UsageError("encode takes exactly one frame");
  const auto enc = cfl::EncodeFrame(images[0].frame, {o.q_index}, EncoderFrom(o));
  std::ofstream out(o.out, std::ios::binary);
  out.write(reinterpret_cast<const char*>(enc.bitstream.data()),
            static_cast<std::streamsize>(enc.bitstream.size()));
  if (!out) cfl::Fail(cfl::ErrorCode::kIoError, "cannot write " + o.out);
  nlohmann::ordered_json j = {{"bits", enc.stats.total_bits},
                              {"bytes", enc.bitstream.size()},
                              {"sse_y", enc.stats.sse[0]},
                              {"sse_cb", enc.stats.sse[1]},
                              {"sse_cr", enc.stats.sse[2]},
                              {"cfl_blocks", enc.stats.cfl_blocks},
                              {"dc_blocks", enc.stats.dc_blocks}};
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int CmdDecode(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("decode takes exactly one --input");
  std::ifstream in(o.inputs[0], std::ios::binary);
  if (!in) cfl::Fail(cfl::ErrorCode::kIoError, "input not found: " + o.inputs[0]);
  const std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  const cfl::Frame frame = cfl::DecodeFrame(data);
  std::ofstream out(o.out, std::ios::binary);
  cfl::WriteY4mHeader(out, cfl::MakeY4mHeader(frame));
  cfl::WriteY4mFrame(out, frame);
  if (!out) cfl::Fail(cfl::ErrorCode::kIoError, "cannot write " + o.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chroma-from-luma intra prediction experiments"};
  app.set_config("--config", "", "INI/TOML file with option defaults (flags win)");
  app.require_subcommand(1);
  Options eo, co, uo, no, xo;

  auto* eval = app.add_subcommand("eval", "RD sweep with CfL on/off and BD-rate table");
  AddInput(eval, eo);
  AddSynthetic(eval, eo);
  AddFormat(eval, eo, "420");
  AddEncoderOptions(eval, eo);
  eval->add_option("-q,--quantizers", eo.quantizers, "Quantizer indices")
      ->delimiter(',')
      ->check(CLI::Range(0, 255))
      ->envname("CFL_QUANTIZERS");
  eval->add_option("--cfl", eo.cfl, "Tool settings to run")
      ->check(CLI::IsMember({"on", "off", "both"}))
      ->envname("CFL_CFL")
      ->capture_default_str();
  eval->add_option("-j,--jobs", eo.jobs, "Parallel (frame, quantizer) jobs")
      ->check(CLI::PositiveNumber)
      ->envname("CFL_JOBS");
  eval->add_option("--bd-method", eo.bd_method, "Curve interpolation for BD-rate")
      ->check(CLI::IsMember({"pchip", "cubic"}))
      ->capture_default_str();
  AddOut(eval, eo, "cfl_out", "Output directory");

  auto* dc = app.add_subcommand("analyze-dc", "Squared DC prediction error per block size");
  AddInput(dc, co);
  AddSynthetic(dc, co);
  AddFormat(dc, co, "444");
  AddOut(dc, co, "cfl_out", "Output directory");

  auto* dump = app.add_subcommand("dump-blocks", "Per-block chroma mode decisions");
  AddInput(dump, uo);
  AddSynthetic(dump, uo);
  AddFormat(dump, uo, "420");
  AddEncoderOptions(dump, uo);
  dump->add_option("-q,--q-index", uo.q_index, "Quantizer index")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  dump->add_option("--cfl", uo.cfl, "CfL tool")
      ->check(CLI::IsMember({"on", "off"}))
      ->envname("CFL_CFL")
      ->default_val("on");
  AddOut(dump, uo, "cfl_out", "Output directory");

  auto* encode = app.add_subcommand("encode", "Encode one frame to a .cfl container");
  AddInput(encode, no);
  AddSynthetic(encode, no);
  AddFormat(encode, no, "420");
  AddEncoderOptions(encode, no);
  encode->add_option("-q,--q-index", no.q_index, "Quantizer index")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  encode->add_option("--cfl", no.cfl, "CfL tool")
      ->check(CLI::IsMember({"on", "off"}))
      ->default_val("on");
  AddOut(encode, no, "out.cfl", "Container path");

  auto* decode = app.add_subcommand("decode", "Decode a .cfl container to Y4M");
  AddInput(decode, xo);
  AddOut(decode, xo, "out.y4m", "Y4M path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return CmdEval(eo);
    if (*dc) return CmdAnalyzeDc(co);
    if (*dump) return CmdDumpBlocks(uo);
    if (*encode) return CmdEncode(no);
    if (*decode) return CmdDecode(xo);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cfl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cfl::IsInputError(e.code()) ? kExitUsage : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
