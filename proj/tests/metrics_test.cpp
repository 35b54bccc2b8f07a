// Copyright 2026 The datacast Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "datacast/fixture.hpp"
#include "datacast/metrics.hpp"
#include "oracles.hpp"

namespace {

using namespace dcast;

const MultiplexConfig kPaperMux = preset("drm30-paper");

ExperimentOptions paper_hook() {
  ExperimentOptions o;
  o.codec = Codec::None;
  o.force_body_size = 8724;
  return o;
}

TEST(Estimate, ReferenceFormula) {
  const auto e = estimate_acquisition_seconds(8724, 5000);
  EXPECT_EQ(e.payload_bytes, 8724u);
  EXPECT_EQ(e.payload_bits, 69792u);
  EXPECT_EQ(e.data_bitrate, 5000.0);
  EXPECT_NEAR(e.seconds, 13.9584, 13.9584 * 1e-9);
  EXPECT_NEAR(e.seconds * e.data_bitrate, static_cast<double>(e.payload_bits), 69792 * 1e-9);
}

TEST(Estimate, ZeroPayload) { EXPECT_EQ(estimate_acquisition_seconds(0, 5000).seconds, 0.0); }

TEST(Estimate, UncompressedCounterfactual) {
  const auto e = estimate_acquisition_seconds(14141, 5000);
  EXPECT_EQ(e.payload_bits, 113128u);
  EXPECT_NEAR(e.seconds, 22.6256, 22.6256 * 1e-9);
}

TEST(Estimate, ZeroBitrate) {
  try {
    estimate_acquisition_seconds(1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroBitrate);
  }
}

TEST(Estimate, TextRendering) {
  EXPECT_EQ(estimate_text(estimate_acquisition_seconds(8724, 5000)),
            "estimate 8724 bytes * 8 = 69792 bits / 5000 bit/s = 13.9584 s\n");
}

TEST(Experiment, ReferenceRunWithinBand) {
  const auto res = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{}, paper_hook());
  ASSERT_EQ(res.report.outcome, Outcome::Complete);
  EXPECT_EQ(res.estimate.payload_bytes, 8724u);
  EXPECT_GT(*res.report.elapsed, 13.9584);
  EXPECT_LE(*res.report.elapsed, 1.35 * 13.9584);
  // 8875-byte cycle in 250-byte frames: the body ends in frame 35.
  EXPECT_EQ(res.cycle_bytes, 8875u);
  EXPECT_NEAR(*res.report.elapsed, 36 * 0.4, 1e-9);
  // The forced body is a truncated container, so it cannot be unpacked.
  EXPECT_FALSE(res.delivery.delivered);
  EXPECT_TRUE(res.delivery.error);
}

TEST(Experiment, ReferenceRunDeflateDelivers) {
  const auto bundle = fixture::reference_bundle();
  const auto res = run_experiment(bundle, kPaperMux, ChannelModel{}, ExperimentOptions{});
  ASSERT_TRUE(res.delivery.delivered);
  EXPECT_EQ(res.delivery.files, bundle.files);
  EXPECT_GT(*res.report.elapsed, res.estimate.seconds);
  EXPECT_EQ(res.delivery.launch->entry_point, "demo1.ncl");
}

TEST(Experiment, LossOnlyDelays) {
  const auto clean = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{}, paper_hook());
  const auto lossy = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{0.5, 0, 1, 7}, paper_hook());
  ASSERT_EQ(lossy.report.outcome, Outcome::Complete);
  EXPECT_GT(*lossy.report.elapsed, *clean.report.elapsed);
  EXPECT_GT(lossy.report.frames_seen, 0u);
}

TEST(Experiment, DoubledBitrateHalvesElapsed) {
  const auto bundle = fixture::reference_bundle();
  for (double r : {2500.0, 5000.0, 10000.0}) {
    const auto slow = run_experiment(bundle, MultiplexConfig{r, 0, 0.4, ""}, ChannelModel{}, paper_hook());
    const auto fast = run_experiment(bundle, MultiplexConfig{2 * r, 0, 0.4, ""}, ChannelModel{}, paper_hook());
    EXPECT_LE(std::abs(*fast.report.elapsed - *slow.report.elapsed / 2), 0.4) << r;
  }
}

TEST(Experiment, LaunchLatencyIsAdded) {
  auto opts = paper_hook();
  const auto base = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{}, opts);
  opts.launch_latency_s = 3.6;
  const auto slow = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{}, opts);
  EXPECT_NEAR(*slow.report.elapsed - *base.report.elapsed, 3.6, 1e-12);
  EXPECT_EQ(slow.report.completion_time, base.report.completion_time);
}

TEST(Experiment, JoinOffsetShiftsJoinTime) {
  auto opts = paper_hook();
  opts.join_frame = 10;
  const auto res = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{}, opts);
  EXPECT_DOUBLE_EQ(res.report.join_time, 4.0);
  EXPECT_NEAR(*res.report.elapsed, *res.report.completion_time - 4.0, 1e-12);
}

TEST(Experiment, TotalLossTimesOut) {
  auto opts = paper_hook();
  opts.timeout_cycles = 3;
  const auto res = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{1.0, 0, 1, 1}, opts);
  EXPECT_EQ(res.report.outcome, Outcome::TimedOut);
  EXPECT_EQ(res.report.frames_seen, 0u);
  EXPECT_FALSE(res.report.elapsed);
}

TEST(Experiment, TimeoutFramesEndWithinDeadline) {
  EXPECT_EQ(timeout_frames(0.3, 50, 0.4), 37u);
  EXPECT_EQ(timeout_frames(0.4, 50, 0.4), 50u);
  EXPECT_EQ(timeout_frames(0.01, 1, 0.4), 1u);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double cycle = 0.05 + static_cast<double>(rng() % 10000) / 100.0;
    const double n = 1 + static_cast<double>(rng() % 100);
    const auto frames = timeout_frames(cycle, n, 0.4);
    if (cycle * n >= 0.4) {
      EXPECT_LE(static_cast<double>(frames) * 0.4, cycle * n + 1e-9);
      EXPECT_GT(static_cast<double>(frames + 1) * 0.4, cycle * n);
    }
  }
}

TEST(Experiment, EstimateLowerBoundsCleanMeasurement) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const auto bundle = pack_bundle({{"x", oracle::random_bytes(rng, rng() % 5000)}},
                                    ApplicationMetadata{rng(), "x", false, ContentType::InteractiveApplication});
    ExperimentOptions o;
    o.codec = static_cast<Codec>(rng() % 2);
    o.segment_size = 1 + rng() % 4096;
    const MultiplexConfig mux{static_cast<double>(400 + rng() % 20000), 0, 0.4, ""};
    const auto res = run_experiment(bundle, mux, ChannelModel{}, o);
    ASSERT_EQ(res.report.outcome, Outcome::Complete);
    ASSERT_GT(*res.report.elapsed, res.estimate.seconds);
  }
}

TEST(Experiment, ReproducibleReports) {
  const ChannelModel ch{0.3, 1e-4, 2, 2013};
  const auto a = run_experiment(fixture::reference_bundle(), kPaperMux, ch, ExperimentOptions{});
  const auto b = run_experiment(fixture::reference_bundle(), kPaperMux, ch, ExperimentOptions{});
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(report_json(a).dump(), report_json(b).dump());
  EXPECT_EQ(report_text(a.report), report_text(b.report));
}

TEST(Report, JsonSchema) {
  const auto res = run_experiment(fixture::reference_bundle(), kPaperMux, ChannelModel{}, paper_hook());
  const auto j = report_json(res);
  EXPECT_EQ(j["schema"], "datacast.report/1");
  EXPECT_EQ(j["estimate"]["payload_bits"], 69792);
  EXPECT_EQ(j["acquisition"]["outcome"], "complete");
  EXPECT_EQ(j["schedule"]["cycle_bytes"], 8875);
  EXPECT_EQ(j["schedule"]["frame_capacity"], 250);
  EXPECT_TRUE(j["acquisition"]["elapsed"].is_number());
  EXPECT_EQ(j["delivery"]["delivered"], false);
}

TEST(Report, TextLines) {
  AcquisitionReport r;
  const auto text = report_text(r);
  EXPECT_NE(text.find("outcome=timed_out\n"), std::string::npos);
  EXPECT_NE(text.find("elapsed=-\n"), std::string::npos);
  r.outcome = Outcome::Complete;
  r.elapsed = 14.4;
  EXPECT_NE(report_text(r).find("elapsed=14.4\n"), std::string::npos);
}

}  // namespace
