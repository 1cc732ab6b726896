// Copyright 2026 The Authors.
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

#include "seqsub/instance_io.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

namespace seqsub {
namespace {

const Json& Require(const Json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InstanceError(field, "missing required field");
  }
  return obj.at(key);
}

double Number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw InstanceError(field, "expected a number");
  return v.get<double>();
}

int Integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw InstanceError(field, "expected an integer");
  return v.get<int>();
}

std::string String(const Json& v, const std::string& field) {
  if (!v.is_string()) throw InstanceError(field, "expected a string");
  return v.get<std::string>();
}

const Json& Array(const Json& v, const std::string& field) {
  if (!v.is_array()) throw InstanceError(field, "expected an array");
  return v;
}

}  // namespace

AdInstance ParseAdInstance(const Json& doc) {
  if (!doc.is_object()) throw InstanceError("$", "expected a JSON object");
  std::vector<Ad> ads;
  const Json& ads_json = Array(Require(doc, "ads", "ads"), "ads");
  for (std::size_t i = 0; i < ads_json.size(); ++i) {
    const std::string f = "ads[" + std::to_string(i) + "]";
    ads.push_back({String(Require(ads_json[i], "id", f + ".id"), f + ".id"),
                   Number(Require(ads_json[i], "budget", f + ".budget"),
                          f + ".budget")});
  }
  std::vector<QueryType> types;
  const Json& types_json =
      Array(Require(doc, "query_types", "query_types"), "query_types");
  for (std::size_t j = 0; j < types_json.size(); ++j) {
    const std::string f = "query_types[" + std::to_string(j) + "]";
    types.push_back({String(Require(types_json[j], "id", f + ".id"), f + ".id"),
                     Number(Require(types_json[j], "prob", f + ".prob"),
                            f + ".prob")});
  }

  std::vector<std::vector<double>> bids(ads.size(),
                                        std::vector<double>(types.size(), 0.0));
  const Json& bids_json = Require(doc, "bids", "bids");
  if (!bids_json.is_object()) throw InstanceError("bids", "expected an object");
  for (const auto& [ad_id, row] : bids_json.items()) {
    const std::string f = "bids." + ad_id;
    std::size_t i = ads.size();
    for (std::size_t k = 0; k < ads.size(); ++k) {
      if (ads[k].id == ad_id) i = k;
    }
    if (i == ads.size()) throw InstanceError(f, "unknown ad id");
    if (!row.is_object()) throw InstanceError(f, "expected an object");
    for (const auto& [type_id, value] : row.items()) {
      std::size_t j = types.size();
      for (std::size_t k = 0; k < types.size(); ++k) {
        if (types[k].id == type_id) j = k;
      }
      if (j == types.size()) {
        throw InstanceError(f + "." + type_id, "unknown query type id");
      }
      bids[i][j] = Number(value, f + "." + type_id);
    }
  }
  const int slots = Integer(Require(doc, "slots", "slots"), "slots");
  const double horizon = Number(Require(doc, "horizon", "horizon"), "horizon");
  return AdInstance(std::move(ads), std::move(types), std::move(bids), slots,
                    horizon);
}

RewriteInstance ParseRewriteInstance(const Json& doc) {
  AdInstance base = ParseAdInstance(doc);
  std::vector<Rewrite> rewrites;
  const Json& rw_json = Array(Require(doc, "rewrites", "rewrites"), "rewrites");
  for (std::size_t r = 0; r < rw_json.size(); ++r) {
    const std::string f = "rewrites[" + std::to_string(r) + "]";
    Rewrite rw;
    rw.id = String(Require(rw_json[r], "id", f + ".id"), f + ".id");
    const Json& ads = Array(Require(rw_json[r], "ads", f + ".ads"), f + ".ads");
    for (const auto& a : ads) {
      const std::string id = String(a, f + ".ads");
      const auto idx = base.AdIndex(id);
      if (!idx) throw InstanceError(f + ".ads", "unknown ad id '" + id + "'");
      rw.ads.push_back(*idx);
    }
    rewrites.push_back(std::move(rw));
  }
  const int k = Integer(Require(doc, "k", "k"), "k");
  return RewriteInstance(std::move(base), std::move(rewrites), k);
}

LoadedInstance LoadInstance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("file", "cannot read '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  Json doc;
  try {
    doc = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw InstanceError("file", std::string("invalid JSON: ") + e.what());
  }
  std::optional<RewriteInstance> rewrite;
  if (doc.is_object() && doc.contains("rewrites")) {
    rewrite = ParseRewriteInstance(doc);
  }
  return {ParseAdInstance(doc), std::move(rewrite), Sha256Hex(bytes)};
}

Json AdInstanceToJson(const AdInstance& instance) {
  Json doc;
  doc["ads"] = Json::array();
  for (std::size_t i = 0; i < instance.num_ads(); ++i) {
    doc["ads"].push_back(
        {{"id", instance.ad(i).id}, {"budget", instance.ad(i).budget}});
  }
  doc["query_types"] = Json::array();
  for (std::size_t j = 0; j < instance.num_types(); ++j) {
    doc["query_types"].push_back({{"id", instance.query_type(j).id},
                                  {"prob", instance.query_type(j).prob}});
  }
  doc["bids"] = Json::object();
  for (std::size_t i = 0; i < instance.num_ads(); ++i) {
    Json row = Json::object();
    for (std::size_t j = 0; j < instance.num_types(); ++j) {
      if (instance.bid(i, j) != 0.0) {
        row[instance.query_type(j).id] = instance.bid(i, j);
      }
    }
    doc["bids"][instance.ad(i).id] = std::move(row);
  }
  doc["slots"] = instance.slots();
  doc["horizon"] = instance.horizon();
  return doc;
}

Json RewriteInstanceToJson(const RewriteInstance& instance) {
  Json doc = AdInstanceToJson(instance.base());
  doc["rewrites"] = Json::array();
  for (const auto& rw : instance.rewrites()) {
    Json ads = Json::array();
    for (std::size_t i : rw.ads) ads.push_back(instance.base().ad(i).id);
    doc["rewrites"].push_back({{"id", rw.id}, {"ads", std::move(ads)}});
  }
  doc["k"] = instance.k();
  return doc;
}

Json ConfigurationToJson(const AdInstance& instance, const Configuration& c) {
  Json out = Json::object();
  for (std::size_t j = 0; j < c.assignment().size(); ++j) {
    Json ads = Json::array();
    for (std::size_t i : c.ads_for(j)) ads.push_back(instance.ad(i).id);
    out[instance.query_type(j).id] = std::move(ads);
  }
  return out;
}

Json StrategyToJson(const AdInstance& instance, const AllocationStrategy& s) {
  Json out = Json::array();
  double start = 0.0;
  for (const auto& seg : s.segments()) {
    out.push_back({{"configuration", ConfigurationToJson(instance, seg.action)},
                   {"start", start},
                   {"duration", seg.duration}});
    start += seg.duration;
  }
  return out;
}

Json BudgetsToJson(const AdInstance& instance, const BudgetVector& b) {
  Json out = Json::object();
  for (std::size_t i = 0; i < b.size(); ++i) out[instance.ad(i).id] = b[i];
  return out;
}

Json PlanToJson(const RewriteInstance& instance, const RewritePlan& plan) {
  Json out = Json::array();
  for (const auto& tuple : plan.items()) {
    Json rws = Json::array();
    for (std::size_t r : tuple.rewrites) {
      rws.push_back(instance.rewrites()[r].id);
    }
    out.push_back(
        {{"query_type", instance.base().query_type(tuple.query_type).id},
         {"rewrites", std::move(rws)},
         {"budgets", BudgetsToJson(instance.base(), tuple.caps)}});
  }
  return out;
}

std::string Sha256Hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(),
             nullptr);
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

}  // namespace seqsub
