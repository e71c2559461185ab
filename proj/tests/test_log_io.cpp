// Copyright 2026 The foldquad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "foldquad/harness/log_io.hpp"

namespace foldquad {
namespace {

const char* kHeader =
    "t,x1,x2,x3,v1,v2,v3,qw,qx,qy,qz,w1,w2,w3,l,f,tau1,tau2,tau3,contact,xd1,xd2,xd3";

SimLog short_run() {
  ScenarioConfig cfg;
  cfg.duration = 0.5;
  return run_scenario(cfg);
}

TEST(LogCsv, HeaderColumnOrder) {
  EXPECT_EQ(log_header(), kHeader);
  EXPECT_EQ(log_to_csv(SimLog{}), std::string(kHeader) + "\n");
}

TEST(LogCsv, RoundTrip) {
  const SimLog log = short_run();
  std::istringstream in(log_to_csv(log));
  const SimLog back = read_log_csv(in);
  ASSERT_EQ(back.rows.size(), log.rows.size());
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const LogRow& a = log.rows[i];
    const LogRow& b = back.rows[i];
    EXPECT_NEAR(a.t, b.t, 1e-12);
    EXPECT_LT((a.x - b.x).norm(), 1e-10);
    EXPECT_LT((a.v - b.v).norm(), 1e-10);
    EXPECT_LT((a.q - b.q).norm(), 1e-10);
    EXPECT_LT((a.omega - b.omega).norm(), 1e-9);
    EXPECT_NEAR(a.l, b.l, 1e-12);
    EXPECT_NEAR(a.thrust, b.thrust, 1e-9);
    EXPECT_LT((a.moment - b.moment).norm(), 1e-12);
    EXPECT_EQ(a.contact, b.contact);
    EXPECT_LT((a.x_d - b.x_d).norm(), 1e-10);
  }
  // Writing the re-read log reproduces the same bytes.
  EXPECT_EQ(log_to_csv(back), log_to_csv(log));
}

TEST(LogCsv, RejectsMalformedInput) {
  auto rejects = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(read_log_csv(in), std::invalid_argument) << text;
  };
  const std::string row0 = "0,0,0,-4,0,0,0,1,0,0,0,0,0,0,0,10,0,0,0,0,2,0,-4\n";
  const std::string row1 = "0.005,0,0,-4,0,0,0,1,0,0,0,0,0,0,0,10,0,0,0,1,2,0,-4\n";
  rejects("");
  rejects("t,x\n" + row0);
  rejects(std::string(kHeader) + "\n");
  rejects(std::string(kHeader) + "\n" + "0,0,0\n");
  rejects(std::string(kHeader) + "\n" + row0 + row0);  // time not increasing
  rejects(std::string(kHeader) + "\n" + "0,0,0,-4,0,0,0,1,0,0,0,0,0,0,0,10,0,0,0,2,2,0,-4\n");
  rejects(std::string(kHeader) + "\n" + "0,0,0,-4,0,0,0,1,0,0,0,0,0,0,0,ten,0,0,0,0,2,0,-4\n");
  rejects(std::string(kHeader) + "\n" + "0,0,0,-4,0,0,0,1,0,0,0,0,0,0,0,10,0,0,0,0,2,0,\n");

  std::istringstream ok(std::string(kHeader) + "\n" + row0 + "\n" + row1);
  const SimLog log = read_log_csv(ok);
  ASSERT_EQ(log.rows.size(), 2u);
  EXPECT_TRUE(log.rows[1].contact);
}

TEST(TraceCsv, OptionalHeaderAndRoundTrip) {
  DisplacementTrace tr;
  for (int i = 0; i < 12; ++i) tr.push_back(1e-3 * i, 1e-4 * i * (12 - i));
  std::ostringstream out;
  write_trace_csv(tr, out);
  {
    std::istringstream in(out.str());
    const DisplacementTrace back = read_trace_csv(in);
    EXPECT_EQ(back.t, tr.t);
    EXPECT_EQ(back.l, tr.l);
  }
  {
    std::istringstream in("0,0\n0.001,0.5\n");
    EXPECT_EQ(read_trace_csv(in).size(), 2u);
  }
}

TEST(TraceCsv, RejectsBadRows) {
  auto rejects = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(read_trace_csv(in), std::invalid_argument) << text;
  };
  rejects("t,l\n0,0\n0.001\n");
  rejects("t,l\n0,0\nx,1\n");
  rejects("t,l\n0,0\n0,1\n");
  rejects("t,l\n");
}

}  // namespace
}  // namespace foldquad
