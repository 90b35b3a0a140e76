#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace gridmc {

// DSRC channel numbers: seven 10 MHz channels 172..184, 178 is the control
// channel (CCH), the other six are service channels (SCH).
class ChannelId {
  public:
    ChannelId() : id_(0) {} // unset; valid() is false
    explicit ChannelId(int id) : id_(static_cast<std::int16_t>(id)) {
        if (!is_valid_number(id))
            throw std::invalid_argument("ChannelId: not a DSRC channel number");
    }

    int number() const { return id_; }
    bool valid() const { return id_ != 0; }
    bool is_cch() const { return id_ == 178; }
    bool is_sch() const { return valid() && !is_cch(); }

    friend bool operator==(ChannelId a, ChannelId b) { return a.id_ == b.id_; }
    friend bool operator!=(ChannelId a, ChannelId b) { return a.id_ != b.id_; }
    friend bool operator<(ChannelId a, ChannelId b) { return a.id_ < b.id_; }

    static bool is_valid_number(int id) {
        return id >= 172 && id <= 184 && id % 2 == 0;
    }

    // dense index 0..6 over {172,174,176,178,180,182,184}
    int index() const { return (id_ - 172) / 2; }
    static ChannelId from_index(int idx) { return ChannelId(172 + 2 * idx); }

  private:
    std::int16_t id_;
};

inline const ChannelId kCch{178};
inline constexpr int kNumChannels = 7;
inline constexpr int kNumSch = 6;

// SCH symbol order is ascending channel number.
inline const std::array<ChannelId, kNumSch>& sch_channels() {
    static const std::array<ChannelId, kNumSch> chans = {
        ChannelId(172), ChannelId(174), ChannelId(176),
        ChannelId(180), ChannelId(182), ChannelId(184)};
    return chans;
}

// index 0..5 within sch_channels(); throws for the CCH
inline int sch_index(ChannelId ch) {
    if (!ch.is_sch()) throw std::invalid_argument("sch_index: not an SCH");
    const int n = ch.number();
    return n < 178 ? (n - 172) / 2 : (n - 174) / 2;
}

} // namespace gridmc
