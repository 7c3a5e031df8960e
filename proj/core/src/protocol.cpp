// Copyright 2026 The Knit Authors
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

#include "knit/protocol.hpp"

#include <set>

#include "knit/error.hpp"

namespace knit {

std::vector<int> step_qubits(const Step& step) {
  return std::visit(
      [](const auto& s) -> std::vector<int> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UnitaryStep> || std::is_same_v<T, ConditionalStep> ||
                      std::is_same_v<T, PrepareStep>) {
          return s.qubits;
        } else if constexpr (std::is_same_v<T, MeasureStep>) {
          return {s.qubit};
        } else {
          return {};
        }
      },
      step);
}

namespace {

std::vector<std::string> step_requires(const Step& step) {
  if (const auto* c = std::get_if<ConditionalStep>(&step)) return c->keys;
  if (const auto* s = std::get_if<SignStep>(&step)) return s->keys;
  if (const auto* p = std::get_if<PostselectStep>(&step)) return {p->bit};
  return {};
}

void check_instrument(const TwoPartyProtocol& p, const LocalInstrument& instr, Party expected) {
  if (instr.party != expected) throw InputError("instrument party label mismatch");
  for (const Step& step : instr.steps) {
    for (int q : step_qubits(step)) {
      if (q < 0 || q >= static_cast<int>(p.qubitParty.size())) {
        throw InputError("protocol step addresses qubit " + std::to_string(q) + " outside the register");
      }
      if (p.qubitParty[q] != expected) {
        throw InputError("party " + to_string(expected) + " step touches qubit " + std::to_string(q) +
                         " owned by the other party");
      }
    }
    if (const auto* c = std::get_if<ConditionalStep>(&step)) {
      if (c->table.size() != (size_t{1} << c->keys.size())) {
        throw InputError("conditional step table size must be 2^keys");
      }
    }
    if (const auto* pr = std::get_if<PrepareStep>(&step)) {
      if (pr->components.empty() || pr->components.size() != pr->amplitudes.size()) {
        throw InputError("prepare step needs matching components and amplitudes");
      }
      if (pr->components.size() > 1 && static_cast<int>(pr->components.size()) != p.sharedPhases) {
        throw InputError("prepare step phase count does not match the protocol's shared phases");
      }
    }
  }
}

}  // namespace

std::vector<ScheduledOp> linearize(const TwoPartyProtocol& p) {
  check_instrument(p, p.instrA, Party::A);
  check_instrument(p, p.instrB, Party::B);
  for (const Message& m : p.messages) {
    if (p.setting == Setting::LO) throw InputError("LO protocol may not send messages");
    if (p.setting == Setting::LO_ONEWAY_CC && m.from != Party::A) {
      throw InputError("one-way protocol may only send messages from A to B");
    }
  }

  const LocalInstrument* instr[2] = {&p.instrA, &p.instrB};
  std::set<std::string> recorded[2];
  std::set<std::string> known[2];
  size_t cursor[2] = {0, 0};
  size_t nextMessage = 0;
  std::vector<ScheduledOp> order;

  auto done = [&] {
    return cursor[0] == instr[0]->steps.size() && cursor[1] == instr[1]->steps.size() &&
           nextMessage == p.messages.size();
  };
  while (!done()) {
    bool progress = false;
    while (nextMessage < p.messages.size()) {
      const Message& m = p.messages[nextMessage];
      const int from = m.from == Party::A ? 0 : 1;
      bool ready = true;
      for (const auto& b : m.bits) ready = ready && recorded[from].count(b) > 0;
      if (!ready) break;
      for (const auto& b : m.bits) known[1 - from].insert(b);
      order.push_back({ScheduledOp::DELIVER, m.from, static_cast<int>(nextMessage)});
      ++nextMessage;
      progress = true;
    }
    for (int party = 0; party < 2; ++party) {
      while (cursor[party] < instr[party]->steps.size()) {
        const Step& step = instr[party]->steps[cursor[party]];
        bool ready = true;
        for (const auto& b : step_requires(step)) ready = ready && known[party].count(b) > 0;
        if (!ready) break;
        if (const auto* meas = std::get_if<MeasureStep>(&step)) {
          if (!recorded[party].insert(meas->bit).second) {
            throw InputError("bit '" + meas->bit + "' recorded twice");
          }
          known[party].insert(meas->bit);
        }
        order.push_back({ScheduledOp::STEP, party == 0 ? Party::A : Party::B, static_cast<int>(cursor[party])});
        ++cursor[party];
        progress = true;
      }
    }
    if (!progress) {
      if (nextMessage < p.messages.size()) {
        throw InputError("message " + std::to_string(nextMessage) + " references an unrecorded bit");
      }
      throw InputError("protocol step references a bit its party never receives");
    }
  }
  return order;
}

}  // namespace knit
