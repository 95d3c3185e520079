/*
 * Copyright 2026 The wgl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wgl {

class TableError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * One known value of the functional: every query w.t^omega having `input`
 * as a prefix (and, when `tail` >= 0, tail symbol t == tail) yields at
 * least `output`.
 */
struct PhiEntry
{
    std::vector<int> input;
    int tail = -1;
    std::string output;
};

/**
 * A finite approximation of a continuous functional from sorted streams to
 * binary strings. Stage s sees only the first s entries.
 */
class MonotoneTable
{
public:
    MonotoneTable() = default;
    explicit MonotoneTable(std::vector<PhiEntry> entries) : entries_(std::move(entries)) {}

    const std::vector<PhiEntry>& entries() const { return entries_; }

    /// Throws TableError when symbols leave [0,k), outputs are not binary,
    /// or two entries that can answer the same query disagree or shrink.
    void validate(int k) const;

    /// Longest output among the first `budget` entries matching prefix.tail^omega.
    std::string query(const std::vector<int>& prefix, int tail, std::size_t budget) const;

    /// JSON: [{"input": "0011", "tail": -1, "output": "010"}, ...]
    static MonotoneTable from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    std::vector<PhiEntry> entries_;
};

/// Random consistent table: outputs grow along a trie of sorted inputs, bits biased to 0.
MonotoneTable random_table(int k, std::size_t entries, std::mt19937_64& rng);

enum class Action { Init, Found, NotFound, Diagonalize, Wait, Keep };
const char* to_string(Action a);

struct StageRecord
{
    int stage = 0;
    std::set<std::string> tree;
    std::vector<int> state;
    std::vector<std::optional<std::string>> rho;
    /// Per strategy; empty at stage 0.
    std::vector<Action> actions;
    /// u-partial sort of the first `stage` symbols, per strategy.
    std::vector<std::vector<int>> partialSorts;
    std::vector<std::string> errors;
};

struct ConstructionState
{
    int k = 0;
    std::vector<int> alpha;
    MonotoneTable phi;
    std::vector<StageRecord> history; // history[s] describes T_s

    const StageRecord& last() const { return history.back(); }
};

ConstructionState run_stages(int k, const std::vector<int>& alpha, const MonotoneTable& phi, int stages);

/// Nodes of a height-s tree lying below some node of length s.
std::set<std::string> extendible(const std::set<std::string>& tree, int height);

struct InvariantReport
{
    std::vector<std::string> violations;
    /// Stage/strategy pairs in state 2, each checked against the functional.
    std::size_t diagonalizations = 0;

    bool ok() const { return violations.empty(); }
};

InvariantReport check_invariants(const ConstructionState& cs, int k);

nlohmann::json to_json(const ConstructionState& cs);

} // namespace wgl
