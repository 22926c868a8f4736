// Copyright 2026 The mtnoise Authors
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

#include "mtnoise/perturb.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/hangul.h"
#include "mtnoise/utf8.h"

namespace mtnoise {

std::u32string ApplySwap(std::u32string_view token, size_t i) {
  std::u32string out(token);
  std::swap(out[i], out[i + 1]);
  return out;
}

std::u32string ApplyDupe(std::u32string_view token, size_t i) {
  std::u32string out(token);
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(i), token[i]);
  return out;
}

std::u32string ApplyDrop(std::u32string_view token, size_t i) {
  std::u32string out(token);
  out.erase(i, 1);
  return out;
}

std::u32string KeyUnits(std::u32string_view token,
                        const KeyboardLayout& layout) {
  if (layout.script() == KeyboardLayout::Script::kHangul) {
    return hangul::Decompose(token);
  }
  return std::u32string(token);
}

std::vector<size_t> KeyEligiblePositions(std::u32string_view units,
                                         const KeyboardLayout& layout) {
  std::vector<size_t> out;
  for (size_t i = 0; i < units.size(); ++i) {
    if (layout.Neighbors(FoldCase(units[i])) != nullptr) out.push_back(i);
  }
  return out;
}

Perturbation ApplyKey(std::u32string_view token, size_t position,
                      char32_t neighbor, const KeyboardLayout& layout) {
  std::u32string units = KeyUnits(token, layout);
  char32_t replacement = neighbor;
  if (IsUpper(units[position])) replacement = ToUpper(neighbor);
  units[position] = replacement;
  Perturbation out;
  out.position = position;
  out.detail = std::u32string(1, replacement);
  out.token = layout.script() == KeyboardLayout::Script::kHangul
                  ? hangul::Compose(units)
                  : std::move(units);
  return out;
}

std::optional<Perturbation> PerturbSwap(std::u32string_view token,
                                        RandomStream& rng) {
  if (token.size() < 2) return std::nullopt;
  const size_t i = rng.UniformBelow(token.size() - 1);
  return Perturbation{ApplySwap(token, i), i, std::u32string(token.substr(i, 2))};
}

std::optional<Perturbation> PerturbDupe(std::u32string_view token,
                                        RandomStream& rng) {
  if (token.empty()) return std::nullopt;
  const size_t i = rng.UniformBelow(token.size());
  return Perturbation{ApplyDupe(token, i), i, std::u32string(1, token[i])};
}

std::optional<Perturbation> PerturbDrop(std::u32string_view token,
                                        RandomStream& rng) {
  if (token.size() < 2) return std::nullopt;
  const size_t i = rng.UniformBelow(token.size());
  return Perturbation{ApplyDrop(token, i), i, std::u32string(1, token[i])};
}

std::optional<Perturbation> PerturbKey(std::u32string_view token,
                                       RandomStream& rng,
                                       const KeyboardLayout& layout) {
  const std::u32string units = KeyUnits(token, layout);
  const std::vector<size_t> eligible = KeyEligiblePositions(units, layout);
  if (eligible.empty()) return std::nullopt;
  const size_t position = eligible[rng.UniformBelow(eligible.size())];
  const std::vector<char32_t>& neighbors =
      *layout.Neighbors(FoldCase(units[position]));
  const char32_t neighbor = neighbors[rng.UniformBelow(neighbors.size())];
  return ApplyKey(token, position, neighbor, layout);
}

std::optional<Perturbation> Perturb(NoiseType type, std::u32string_view token,
                                    RandomStream& rng,
                                    const KeyboardLayout* layout) {
  switch (type) {
    case NoiseType::kSwap:
      return PerturbSwap(token, rng);
    case NoiseType::kDupe:
      return PerturbDupe(token, rng);
    case NoiseType::kDrop:
      return PerturbDrop(token, rng);
    case NoiseType::kKey:
      return PerturbKey(token, rng, *layout);
  }
  return std::nullopt;
}

absl::StatusOr<std::u32string> ReplayRecord(std::u32string_view token,
                                            const PerturbationRecord& record,
                                            const KeyboardLayout* layout) {
  if (!record.applied) return std::u32string(token);
  auto mismatch = [&] {
    return absl::FailedPreconditionError(absl::StrCat(
        "record for token ", record.token_index, " (",
        std::string(NoiseTypeName(record.type)), " at ", record.char_position,
        ") does not match token '", EncodeUtf8(token), "'"));
  };
  auto detail = DecodeUtf8(record.detail);
  if (!detail.ok()) return detail.status();
  const auto pos = static_cast<size_t>(record.char_position);
  switch (record.type) {
    case NoiseType::kSwap:
      if (pos + 1 >= token.size() || token.substr(pos, 2) != *detail) {
        return mismatch();
      }
      return ApplySwap(token, pos);
    case NoiseType::kDupe:
      if (pos >= token.size() || *detail != token.substr(pos, 1)) {
        return mismatch();
      }
      return ApplyDupe(token, pos);
    case NoiseType::kDrop:
      if (token.size() < 2 || pos >= token.size() ||
          *detail != token.substr(pos, 1)) {
        return mismatch();
      }
      return ApplyDrop(token, pos);
    case NoiseType::kKey: {
      if (layout == nullptr) {
        return absl::FailedPreconditionError(
            "key noise record needs a keyboard layout to replay");
      }
      const std::u32string units = KeyUnits(token, *layout);
      if (pos >= units.size() || detail->size() != 1) return mismatch();
      std::u32string replaced = units;
      replaced[pos] = (*detail)[0];
      if (layout->script() == KeyboardLayout::Script::kHangul) {
        return hangul::Compose(replaced);
      }
      return replaced;
    }
  }
  return mismatch();
}

}  // namespace mtnoise
