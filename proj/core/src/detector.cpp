#include "lsbauth/authcodec.hpp"

#include <algorithm>
#include <stdexcept>

namespace lsbauth {

Detector::Detector(std::vector<Key> roots, int L, int r) : L_(L), r_(r) {
  if (r < 0) throw std::invalid_argument("look-ahead window must be non-negative");
  if (L < 0) throw std::invalid_argument("negative coded-bit count");
  chains_.reserve(roots.size());
  for (auto& k : roots) chains_.emplace_back(std::move(k));
  gap_.assign(chains_.size(), 0);
}

bool Detector::step(const std::vector<BitString>& delivered) {
  if (delivered.size() != chains_.size()) {
    throw std::invalid_argument("packet vector does not match channel count");
  }
  // Without digest bits there is nothing to check.
  if (L_ == 0) {
    for (auto& c : chains_) c.advance();
    last_alarm_ = false;
    return false;
  }

  if (have_last_ && delivered == last_) {
    ++held_run_;
    for (auto& u : gap_) ++u;
    last_alarm_ = held_run_ > static_cast<std::uint64_t>(r_);
    return last_alarm_;
  }

  held_run_ = 0;
  bool alarm = false;
  for (std::size_t i = 0; i < chains_.size(); ++i) {
    const CodedMeasurement packet{delivered[i], L_};
    // The held count predicts the offset, so it is tried first; shorter
    // offsets only matter if a fresh packet happened to repeat its predecessor.
    const auto reach = std::min<std::uint64_t>(static_cast<std::uint64_t>(r_), gap_[i]);
    bool ok = false;
    for (std::uint64_t k = 0; k <= reach; ++k) {
      const std::uint64_t tau = reach - k;
      if (verify(packet, chains_[i].mac(tau))) {
        chains_[i].advance(tau + 1);
        gap_[i] -= tau;
        ok = true;
        break;
      }
    }
    if (!ok) {
      chains_[i].advance();
      alarm = true;
    }
  }
  last_ = delivered;
  have_last_ = true;
  last_alarm_ = alarm;
  return alarm;
}

}  // namespace lsbauth
