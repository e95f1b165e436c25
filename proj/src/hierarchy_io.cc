#include "sgch/hierarchy_io.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace sgch {

namespace {

constexpr char kMagic[5] = {'S', 'G', 'C', 'H', '1'};

class Writer {
 public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void i32(int32_t v) { u32(static_cast<uint32_t>(v)); }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void opt(const std::optional<Minutes>& m) {
    u8(m ? 1 : 0);
    i32(m.value_or(0));
  }
  std::vector<uint8_t> take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> in) : in_(in) {}
  uint8_t u8() { return need(1)[0]; }
  uint32_t u32() {
    const uint8_t* p = need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    const uint8_t* p = need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
  }
  int32_t i32() { return static_cast<int32_t>(u32()); }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    const uint8_t* p = need(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  std::optional<Minutes> opt() {
    uint8_t has = u8();
    Minutes v = i32();
    if (has > 1) throw std::runtime_error("hierarchy file: bad optional flag");
    return has ? std::optional<Minutes>(v) : std::nullopt;
  }
  /// Length prefix, sanity-checked against the remaining bytes.
  uint32_t count(size_t min_item_bytes) {
    uint32_t n = u32();
    if (static_cast<uint64_t>(n) * min_item_bytes > in_.size() - pos_) {
      throw std::runtime_error("hierarchy file truncated");
    }
    return n;
  }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  const uint8_t* need(size_t n) {
    if (in_.size() - pos_ < n) throw std::runtime_error("hierarchy file truncated");
    const uint8_t* p = in_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

constexpr size_t kConnectionBytes = 4 * 4 + 2 + 4 + 1 + 4 + 3 * 8 + 4;

void write_ref(Writer& w, const ConnRef& r) {
  w.u32(r.index);
  w.i32(r.day);
}

ConnRef read_ref(Reader& r) {
  ConnRef c;
  c.index = r.u32();
  c.day = r.i32();
  return c;
}

void write_set(Writer& w, const EdgeConnectionSet& s) {
  w.u32(static_cast<uint32_t>(s.size()));
  for (const Connection& c : s.connections()) {
    w.u32(c.z1);
    w.u32(c.z2);
    w.i32(c.dep);
    w.i32(c.arr);
    w.u8(static_cast<uint8_t>(c.transfers & 0xff));
    w.u8(static_cast<uint8_t>(c.transfers >> 8));
    w.u32(c.label);
    w.u8(static_cast<uint8_t>(c.via.kind));
    w.u32(c.via.node);
    write_ref(w, c.via.first);
    write_ref(w, c.via.loop);
    write_ref(w, c.via.second);
    w.u32(c.via.snapshot);
  }
}

EdgeConnectionSet read_set(Reader& r, const Timetable& tt, StationId target) {
  std::vector<Connection> conns(r.count(kConnectionBytes));
  for (Connection& c : conns) {
    c.z1 = r.u32();
    c.z2 = r.u32();
    c.dep = r.i32();
    c.arr = r.i32();
    c.transfers = r.u8();
    c.transfers |= static_cast<uint16_t>(r.u8()) << 8;
    c.label = r.u32();
    uint8_t kind = r.u8();
    if (kind > static_cast<uint8_t>(Via::Kind::kLink)) {
      throw std::runtime_error("hierarchy file: bad via kind");
    }
    c.via.kind = static_cast<Via::Kind>(kind);
    c.via.node = r.u32();
    c.via.first = read_ref(r);
    c.via.loop = read_ref(r);
    c.via.second = read_ref(r);
    c.via.snapshot = r.u32();
  }
  try {
    return build_edge_index(std::move(conns), tt, target);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("hierarchy file: ") + e.what());
  }
}

}  // namespace

std::vector<uint8_t> serialize_hierarchy(const Hierarchy& h) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<uint8_t>(c));
  const Timetable& tt = h.graph.timetable();
  w.u32(tt.traffic_days());
  w.u32(static_cast<uint32_t>(tt.num_stations()));
  for (const Station& s : tt.stations()) {
    w.str(s.name);
    w.i32(s.transfer);
  }
  w.u32(static_cast<uint32_t>(tt.trains().size()));
  for (const Train& t : tt.trains()) {
    w.str(t.name);
    w.u32(static_cast<uint32_t>(t.stops.size()));
    for (StopEventId z : t.stops) {
      const StopEvent& e = tt.stop_event(z);
      w.u32(e.station);
      w.opt(e.arrival);
      w.opt(e.departure);
    }
  }
  const ContractionParams& p = h.params;
  w.u32(p.hop_limit);
  w.u32(p.transfer_limit);
  w.i32(p.duration_slack);
  w.f64(p.quotient_weight);
  w.f64(p.depth_weight);
  w.u64(h.shortcuts);
  w.u32(static_cast<uint32_t>(h.rank.size()));
  for (uint32_t r : h.rank) w.u32(r);
  w.u32(static_cast<uint32_t>(h.graph.num_edges()));
  for (const GraphEdge& e : h.graph.edges()) {
    w.u32(e.from);
    w.u32(e.to);
    write_set(w, e.conns);
  }
  // Snapshots are loop closure levels; their target is the loop station,
  // which we store alongside.
  w.u32(static_cast<uint32_t>(h.graph.snapshots().size()));
  for (const EdgeConnectionSet& s : h.graph.snapshots()) {
    StationId at = s.empty() ? 0 : tt.stop_event(s[0].z2).station;
    w.u32(at);
    write_set(w, s);
  }
  return w.take();
}

Hierarchy deserialize_hierarchy(std::span<const uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic ||
      std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("not a hierarchy file (magic/version mismatch)");
  }
  Reader r(bytes.subspan(sizeof kMagic));
  TimetableBuilder b;
  b.set_traffic_days(r.u32());
  const uint32_t stations = r.count(8);
  for (uint32_t s = 0; s < stations; ++s) {
    std::string name = r.str();
    b.add_station(std::move(name), r.i32());
  }
  const uint32_t trains = r.count(8);
  try {
    for (uint32_t t = 0; t < trains; ++t) {
      std::string name = r.str();
      std::vector<TrainStop> stops(r.count(14));
      for (TrainStop& s : stops) {
        s.station = r.u32();
        if (s.station >= stations) {
          throw std::runtime_error("hierarchy file: bad station reference");
        }
        s.arrival = r.opt();
        s.departure = r.opt();
      }
      b.add_train(stops, std::move(name));
    }
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("hierarchy file: ") + e.what());
  }
  auto tt = std::make_shared<const Timetable>(std::move(b).build());

  Hierarchy h;
  h.params.hop_limit = r.u32();
  h.params.transfer_limit = r.u32();
  h.params.duration_slack = r.i32();
  h.params.quotient_weight = r.f64();
  h.params.depth_weight = r.f64();
  h.shortcuts = r.u64();
  h.rank.resize(r.count(4));
  for (uint32_t& x : h.rank) x = r.u32();
  if (h.rank.size() != stations) {
    throw std::runtime_error("hierarchy file: rank size mismatch");
  }
  StationGraph g(tt);
  const uint32_t edges = r.count(12);
  for (uint32_t i = 0; i < edges; ++i) {
    StationId from = r.u32(), to = r.u32();
    if (from >= stations || to >= stations || g.find_edge(from, to) != kNoIndex) {
      throw std::runtime_error("hierarchy file: bad edge");
    }
    g.set_edge(from, to, read_set(r, *tt, to));
  }
  const uint32_t snaps = r.count(8);
  for (uint32_t i = 0; i < snaps; ++i) {
    StationId at = r.u32();
    if (at >= stations) throw std::runtime_error("hierarchy file: bad snapshot");
    g.add_snapshot(read_set(r, *tt, at));
  }
  if (!r.at_end()) throw std::runtime_error("hierarchy file: trailing bytes");
  h.graph = std::move(g);
  return h;
}

void save_hierarchy(const Hierarchy& h, const std::string& path) {
  std::vector<uint8_t> bytes = serialize_hierarchy(h);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Hierarchy load_hierarchy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return deserialize_hierarchy(bytes);
}

}  // namespace sgch
