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

#ifndef CFL_SWEEP_H_
#define CFL_SWEEP_H_

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "cfl/bd_rate.h"
#include "cfl/codec.h"
#include "cfl/error.h"
#include "cfl/frame.h"
#include "cfl/metrics.h"
#include "json.hpp"

namespace cfl {

struct SweepImage {
  std::string name;
  Frame frame;
};

struct SweepConfig {
  std::vector<int> quantizers = {20, 32, 43, 55};
  std::vector<bool> cfl_settings = {false, true};
  EncoderConfig encoder;  // cfl_enabled is overridden per setting
  int jobs = 1;
};

struct SweepPoint {
  std::string image;
  bool cfl_enabled = false;
  int q_index = 0;
  uint64_t bits = 0;
  double psnr_y = 0;
  double psnr_cb = 0;
  double psnr_cr = 0;
  double ciede2000 = 0;  // mean dE00
  double ciede2000_db = 0;
  int cfl_blocks = 0;
  int dc_blocks = 0;
  bool closure_ok = false;
};

inline std::string ConfigName(bool cfl_enabled) { return cfl_enabled ? "cfl-on" : "cfl-off"; }

enum class Metric { kPsnrY, kPsnrCb, kPsnrCr, kCiede2000 };
inline constexpr Metric kAllMetrics[] = {Metric::kPsnrY, Metric::kPsnrCb, Metric::kPsnrCr,
                                         Metric::kCiede2000};

inline std::string MetricName(Metric m) {
  switch (m) {
    case Metric::kPsnrY: return "PSNR";
    case Metric::kPsnrCb: return "PSNR-Cb";
    case Metric::kPsnrCr: return "PSNR-Cr";
    case Metric::kCiede2000: return "CIEDE2000";
  }
  return "";
}

inline double MetricValue(const SweepPoint& p, Metric m) {
  switch (m) {
    case Metric::kPsnrY: return p.psnr_y;
    case Metric::kPsnrCb: return p.psnr_cb;
    case Metric::kPsnrCr: return p.psnr_cr;
    case Metric::kCiede2000: return p.ciede2000_db;
  }
  return 0;
}

// Encodes, decodes and scores one frame at one quantizer.
inline SweepPoint EvaluatePoint(const SweepImage& img, int q_index, const EncoderConfig& cfg) {
  const EncodedFrame enc = EncodeFrame(img.frame, QuantizerConfig{q_index}, cfg);
  const Frame dec = DecodeFrame(enc.bitstream);
  SweepPoint p;
  p.image = img.name;
  p.cfl_enabled = cfg.cfl_enabled;
  p.q_index = q_index;
  p.bits = enc.stats.total_bits;
  p.closure_ok = dec == enc.reconstruction;
  p.psnr_y = Psnr(img.frame.y, enc.reconstruction.y, img.frame.depth);
  p.psnr_cb = Psnr(img.frame.cb, enc.reconstruction.cb, img.frame.depth);
  p.psnr_cr = Psnr(img.frame.cr, enc.reconstruction.cr, img.frame.depth);
  p.ciede2000 = Ciede2000(img.frame, enc.reconstruction);
  p.ciede2000_db = CiedeQualityDb(p.ciede2000);
  p.cfl_blocks = enc.stats.cfl_blocks;
  p.dc_blocks = enc.stats.dc_blocks;
  return p;
}

// Runs (image, setting, quantizer) jobs on `jobs` threads. Points come back in
// that nesting order whatever the scheduling. Any closure failure raises
// ClosureMismatch after all jobs finish.
inline std::vector<SweepPoint> RunSweep(const std::vector<SweepImage>& images,
                                        const SweepConfig& cfg) {
  if (images.empty()) Fail(ErrorCode::kEmptyCorpus, "no input frames");
  if (cfg.quantizers.empty()) Fail(ErrorCode::kInvalidArgument, "empty quantizer list");
  if (cfg.cfl_settings.empty()) Fail(ErrorCode::kInvalidArgument, "no tool setting");
  for (int q : cfg.quantizers) QuantizerConfig{q}.Validate();
  cfg.encoder.Validate();

  struct Job {
    size_t image;
    bool cfl;
    int q;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < images.size(); ++i) {
    for (bool c : cfg.cfl_settings) {
      for (int q : cfg.quantizers) jobs.push_back({i, c, q});
    }
  }
  std::vector<SweepPoint> points(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        EncoderConfig ec = cfg.encoder;
        ec.cfl_enabled = jobs[j].cfl;
        points[j] = EvaluatePoint(images[jobs[j].image], jobs[j].q, ec);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& p : points) {
    if (!p.closure_ok) {
      Fail(ErrorCode::kClosureMismatch, "decoder output differs from encoder "
                                        "reconstruction: " + p.image + " q" +
                                            std::to_string(p.q_index));
    }
  }
  return points;
}

inline RdCurve CurveFor(const std::vector<SweepPoint>& points, const std::string& image,
                        bool cfl_enabled, Metric metric) {
  std::vector<RdPoint> rd;
  for (const auto& p : points) {
    if (p.image == image && p.cfl_enabled == cfl_enabled) {
      rd.push_back({static_cast<double>(p.bits), MetricValue(p, metric)});
    }
  }
  return RdCurve(std::move(rd));
}

struct BdRow {
  Metric metric;
  std::vector<std::pair<std::string, double>> per_image;
  double mean = 0;
};

// cfl-on against cfl-off per image, then the arithmetic mean across images.
inline std::vector<BdRow> BdTable(const std::vector<SweepPoint>& points,
                                  BdMethod method = BdMethod::kPchip) {
  std::vector<std::string> names;
  for (const auto& p : points) {
    if (std::find(names.begin(), names.end(), p.image) == names.end()) {
      names.push_back(p.image);
    }
  }
  if (names.empty()) Fail(ErrorCode::kEmptyCorpus, "no sweep points");
  std::vector<BdRow> rows;
  for (Metric m : kAllMetrics) {
    BdRow row{m, {}, 0};
    for (const auto& name : names) {
      const double bd = BdRate(CurveFor(points, name, false, m), CurveFor(points, name, true, m),
                               method);
      row.per_image.emplace_back(name, bd);
      row.mean += bd;
    }
    row.mean /= static_cast<double>(names.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string FormatDouble(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline constexpr const char* kRdCsvHeader =
    "image,config,q_index,bits,psnr_y,psnr_cb,psnr_cr,ciede2000,ciede2000_db,cfl_blocks,"
    "dc_blocks";

inline std::string RdCsv(const std::vector<SweepPoint>& points) {
  std::string out = std::string(kRdCsvHeader) + "\n";
  for (const auto& p : points) {
    out += p.image + "," + ConfigName(p.cfl_enabled) + "," + std::to_string(p.q_index) + "," +
           std::to_string(p.bits) + "," + FormatDouble(p.psnr_y) + "," +
           FormatDouble(p.psnr_cb) + "," + FormatDouble(p.psnr_cr) + "," +
           FormatDouble(p.ciede2000) + "," + FormatDouble(p.ciede2000_db) + "," +
           std::to_string(p.cfl_blocks) + "," + std::to_string(p.dc_blocks) + "\n";
  }
  return out;
}

inline std::string BdCsv(const std::vector<BdRow>& rows) {
  std::string out = "metric,bd_rate_percent\n";
  for (const auto& r : rows) out += MetricName(r.metric) + "," + FormatDouble(r.mean, 4) + "\n";
  return out;
}

inline std::string BdTableText(const std::vector<BdRow>& rows) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %10s\n", "Metric", "BD-rate %");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-12s %10.2f\n", MetricName(r.metric).c_str(), r.mean);
    out += line;
  }
  return out;
}

inline nlohmann::ordered_json SweepJson(const std::vector<SweepPoint>& points,
                                        const std::vector<BdRow>& rows) {
  nlohmann::ordered_json j;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    j["points"].push_back({{"image", p.image},
                           {"config", ConfigName(p.cfl_enabled)},
                           {"q_index", p.q_index},
                           {"bits", p.bits},
                           {"psnr_y", p.psnr_y},
                           {"psnr_cb", p.psnr_cb},
                           {"psnr_cr", p.psnr_cr},
                           {"ciede2000", p.ciede2000},
                           {"ciede2000_db", p.ciede2000_db},
                           {"cfl_blocks", p.cfl_blocks},
                           {"dc_blocks", p.dc_blocks},
                           {"closure_ok", p.closure_ok}});
  }
  j["bd_rate"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const auto& [name, v] : r.per_image) per[name] = v;
    j["bd_rate"].push_back(
        {{"metric", MetricName(r.metric)}, {"mean_percent", r.mean}, {"per_image", per}});
  }
  return j;
}

inline constexpr const char* kTraceCsvHeader =
    "x,y,mode,alpha_cb,alpha_cr,distortion,rate_bits,cost";

inline std::string TraceCsv(const std::vector<BlockTrace>& traces) {
  std::string out = std::string(kTraceCsvHeader) + "\n";
  for (const auto& t : traces) {
    out += std::to_string(t.x) + "," + std::to_string(t.y) + "," +
           (t.mode == ChromaMode::kCfl ? "cfl" : "dc") + "," + std::to_string(t.alpha_cb) +
           "," + std::to_string(t.alpha_cr) + "," + std::to_string(t.distortion) + "," +
           FormatDouble(t.rate_bits()) + "," + FormatDouble(t.cost) + "\n";
  }
  return out;
}

}  // namespace cfl

#endif  // CFL_SWEEP_H_
