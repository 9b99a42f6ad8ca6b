#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polyconc/errors.hpp"

namespace polyconc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One interval [lo,hi], (lo,hi], [lo,hi) or (lo,hi).  Degenerate [r,r] is
// allowed (closed single point); empty intervals are never stored.
struct Interval {
    double lo = 0;
    double hi = 0;
    bool lo_closed = true;
    bool hi_closed = true;

    double length() const { return hi - lo; }
    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !lo_closed) return false;
        if (x == hi && !hi_closed) return false;
        return true;
    }
};

// Sorted, pairwise-disjoint union of intervals.  The carrier for indicator
// sets handed to the weight integrators.
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) {
        normalize();
    }
    static IntervalUnion single(double lo, double hi, bool lo_closed = true, bool hi_closed = true) {
        if (hi < lo) throw validation_error("IntervalUnion: hi < lo");
        IntervalUnion u;
        u.parts_.push_back({lo, hi, lo_closed, hi_closed});
        return u;
    }
    static IntervalUnion empty() { return IntervalUnion(); }

    const std::vector<Interval>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    void add(const Interval& iv) {
        if (iv.hi < iv.lo) throw validation_error("IntervalUnion: hi < lo");
        parts_.push_back(iv);
        normalize();
    }

    bool contains(double x) const {
        for (const auto& p : parts_)
            if (p.contains(x)) return true;
        return false;
    }

    double total_length() const {
        double s = 0;
        for (const auto& p : parts_) s += p.length();
        return s;
    }

    // Union with closure-aware merging of touching parts.
    IntervalUnion unite(const IntervalUnion& other) const {
        std::vector<Interval> all = parts_;
        all.insert(all.end(), other.parts_.begin(), other.parts_.end());
        return IntervalUnion(std::move(all));
    }

    IntervalUnion intersect(const Interval& clip) const {
        std::vector<Interval> out;
        for (const auto& p : parts_) {
            double lo = std::max(p.lo, clip.lo);
            double hi = std::min(p.hi, clip.hi);
            if (lo > hi) continue;
            Interval q{lo, hi,
                       lo == p.lo ? p.lo_closed : clip.lo_closed,
                       hi == p.hi ? p.hi_closed : clip.hi_closed};
            if (q.lo == q.hi && !(q.lo_closed && q.hi_closed)) continue;
            out.push_back(q);
        }
        IntervalUnion u;
        u.parts_ = std::move(out);
        return u;
    }

    // Complement within [lo, hi]; closure flags of the complement are closed
    // (used for measure computations only, where boundaries carry no mass).
    IntervalUnion complement_in(double lo, double hi) const {
        IntervalUnion out;
        double cur = lo;
        for (const auto& p : parts_) {
            double plo = std::max(p.lo, lo);
            double phi = std::min(p.hi, hi);
            if (phi < cur) continue;
            if (plo > cur) out.parts_.push_back({cur, plo, true, true});
            cur = std::max(cur, phi);
        }
        if (cur < hi) out.parts_.push_back({cur, hi, true, true});
        return out;
    }

    // Minkowski enlargement A + (-h, h), clipped merge of overlaps.
    IntervalUnion enlarge(double h) const {
        if (h < 0) throw validation_error("enlarge: h < 0");
        std::vector<Interval> out;
        out.reserve(parts_.size());
        for (const auto& p : parts_)
            out.push_back({p.lo - h, p.hi + h, p.lo_closed, p.hi_closed});
        return IntervalUnion(std::move(out));
    }

    // inf |x - y| over x in this, y in other; 0 if they intersect or touch.
    double distance_to(const IntervalUnion& other) const {
        if (is_empty() || other.is_empty())
            throw validation_error("distance_to: empty set");
        double best = kInf;
        for (const auto& a : parts_)
            for (const auto& b : other.parts_) {
                double d = 0;
                if (a.hi < b.lo) d = b.lo - a.hi;
                else if (b.hi < a.lo) d = a.lo - b.hi;
                best = std::min(best, d);
            }
        return best;
    }

    bool subset_of(double lo, double hi) const {
        for (const auto& p : parts_)
            if (p.lo < lo || p.hi > hi) return false;
        return true;
    }

private:
    void normalize() {
        if (parts_.empty()) return;
        std::sort(parts_.begin(), parts_.end(),
                  [](const Interval& a, const Interval& b) {
                      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
                  });
        std::vector<Interval> merged;
        merged.push_back(parts_.front());
        for (std::size_t i = 1; i < parts_.size(); ++i) {
            Interval& last = merged.back();
            const Interval& cur = parts_[i];
            bool touches = cur.lo < last.hi ||
                           (cur.lo == last.hi && (cur.lo_closed || last.hi_closed));
            if (touches) {
                if (cur.hi > last.hi) {
                    last.hi = cur.hi;
                    last.hi_closed = cur.hi_closed;
                } else if (cur.hi == last.hi) {
                    last.hi_closed = last.hi_closed || cur.hi_closed;
                }
                if (cur.lo == last.lo) last.lo_closed = last.lo_closed || cur.lo_closed;
            } else {
                merged.push_back(cur);
            }
        }
        parts_ = std::move(merged);
    }

    std::vector<Interval> parts_;
};

} // namespace polyconc
