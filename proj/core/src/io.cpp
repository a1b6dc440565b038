#include "csrl/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace csrl {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

std::vector<double> parse_row(const std::string& line, std::size_t expect,
                              const std::filesystem::path& path, int lineno) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(',', pos);
    const std::string cell =
        line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
    row.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (row.size() != expect)
    throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                     std::to_string(expect) + " columns, got " + std::to_string(row.size()));
  return row;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          const std::string& expected_header, std::size_t cols) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw ParseError(path.string() + ":1: unexpected header '" + line + "'");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(parse_row(line, cols, path, lineno));
  }
  return rows;
}

constexpr const char* kDemoHeader = "t,dx,dy,dz,drx,dry,drz,mx,my,mz,mrx,mry,mrz";
constexpr const char* kPoseHeader = "t,x,y,z,rx,ry,rz";
constexpr const char* kJointsHeader = "t,q1,q2,q3,q4,q5,q6,q7";

json vec_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json mat_to_json(const Eigen::MatrixXd& m) {  // row-major nested arrays
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd json_to_mat(const json& rows) {
  const auto r = rows.size();
  const auto c = r > 0 ? rows[0].size() : 0;
  Eigen::MatrixXd m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

Eigen::VectorXd json_to_vec(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

void dump_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

void write_demo_csv(const std::filesystem::path& path, const Demo& demo) {
  if (demo.device.size() != demo.mandrel.size())
    throw InvalidInputError("device/mandrel length mismatch");
  auto out = open_out(path);
  out << kDemoHeader << '\n';
  for (std::size_t i = 0; i < demo.device.size(); ++i) {
    const auto& d = demo.device[i];
    const auto& m = demo.mandrel[i];
    out << format_double(d.t);
    const Vec6 dv = d.pose.to_vec6(), mv = m.pose.to_vec6();
    for (int c = 0; c < 6; ++c) out << ',' << format_double(dv[c]);
    for (int c = 0; c < 6; ++c) out << ',' << format_double(mv[c]);
    out << '\n';
  }
}

Demo read_demo_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, kDemoHeader, 13);
  Demo demo;
  demo.device.frame = Frame::Camera;
  demo.mandrel.frame = Frame::Camera;
  for (const auto& row : rows) {
    Vec6 dv, mv;
    for (int c = 0; c < 6; ++c) dv[c] = row[1 + c];
    for (int c = 0; c < 6; ++c) mv[c] = row[7 + c];
    demo.device.samples.push_back({row[0], Pose6D::from_vec6(dv)});
    demo.mandrel.samples.push_back({row[0], Pose6D::from_vec6(mv)});
  }
  try {
    demo.device.validate();
    demo.mandrel.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return demo;
}

void write_pose_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << kPoseHeader << '\n';
  for (const auto& s : traj.samples) {
    out << format_double(s.t);
    const Vec6 v = s.pose.to_vec6();
    for (int c = 0; c < 6; ++c) out << ',' << format_double(v[c]);
    out << '\n';
  }
}

Trajectory read_pose_csv(const std::filesystem::path& path, Frame frame) {
  const auto rows = read_csv(path, kPoseHeader, 7);
  Trajectory traj;
  traj.frame = frame;
  for (const auto& row : rows) {
    Vec6 v;
    for (int c = 0; c < 6; ++c) v[c] = row[1 + c];
    traj.samples.push_back({row[0], Pose6D::from_vec6(v)});
  }
  try {
    traj.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return traj;
}

void write_joints_csv(const std::filesystem::path& path, const std::vector<JointState>& joints) {
  auto out = open_out(path);
  out << kJointsHeader << '\n';
  for (std::size_t i = 0; i < joints.size(); ++i) {
    out << format_double(static_cast<double>(i));
    for (int c = 0; c < kNumJoints; ++c) out << ',' << format_double(joints[i][c]);
    out << '\n';
  }
}

std::vector<JointState> read_joints_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, kJointsHeader, 8);
  std::vector<JointState> joints;
  for (const auto& row : rows) {
    JointState q;
    for (int c = 0; c < kNumJoints; ++c) q[c] = row[1 + c];
    joints.push_back(q);
  }
  return joints;
}

void write_model_json(const std::filesystem::path& path, const MeanVarModel& model) {
  json j;
  j["length"] = model.length();
  j["count"] = model.count;
  json mean = json::array(), sigma = json::array();
  for (int k = 0; k < model.length(); ++k) {
    mean.push_back(vec_to_json(model.mean[k].to_vec6()));
    sigma.push_back(vec_to_json(model.sigma[k]));
  }
  j["mean"] = mean;
  j["sigma"] = sigma;
  dump_json(path, j);
}

MeanVarModel read_model_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  MeanVarModel model;
  model.count = j.at("count").get<int>();
  const auto& mean = j.at("mean");
  const auto& sigma = j.at("sigma");
  if (mean.size() != sigma.size() || mean.size() != j.at("length").get<std::size_t>())
    throw ValidationError(path.string() + ": length/mean/sigma disagree");
  for (std::size_t k = 0; k < mean.size(); ++k) {
    model.mean.push_back(Pose6D::from_vec6(json_to_vec(mean[k])));
    model.sigma.push_back(json_to_vec(sigma[k]));
  }
  return model;
}

ArmSceneConfig default_arm_scene() {
  ArmSceneConfig cfg;
  cfg.arm = default_arm();
  // mandrel frame in front of the arm, oriented so a relative identity pose
  // matches the arm's natural tool orientation at the home posture
  cfg.mandrel_in_base = Eigen::Isometry3d::Identity();
  cfg.mandrel_in_base.linear() = rotvec_to_matrix(Vec3(0.0, 2.7, 0.0));
  cfg.mandrel_in_base.translation() = Vec3(0.60, 0.0, 0.42);
  // the mandrel itself: a horizontal cylinder under the stitching area
  CylinderObstacle mandrel;
  mandrel.base = Vec3(0.66, -0.12, 0.26);
  mandrel.axis = Vec3(0.0, 1.0, 0.0);
  mandrel.radius = 0.035;
  mandrel.height = 0.24;
  cfg.scene.cylinders.push_back(mandrel);
  return cfg;
}

namespace {

json pose_to_json(const Eigen::Isometry3d& m) {
  const Pose6D p = Pose6D::from_isometry(m);
  return json{{"t", {p.t.x(), p.t.y(), p.t.z()}}, {"r", {p.r.x(), p.r.y(), p.r.z()}}};
}

Eigen::Isometry3d json_to_pose(const json& j) {
  Pose6D p;
  for (int i = 0; i < 3; ++i) p.t[i] = j.at("t")[i].get<double>();
  for (int i = 0; i < 3; ++i) p.r[i] = j.at("r")[i].get<double>();
  return p.to_isometry();
}

}  // namespace

void write_arm_scene_json(const std::filesystem::path& path, const ArmSceneConfig& cfg) {
  json j;
  json dh = json::array();
  for (const auto& row : cfg.arm.dh)
    dh.push_back({{"d", row.d}, {"a", row.a}, {"alpha", row.alpha}, {"theta0", row.theta0}});
  j["arm"]["dh"] = dh;
  json limits = json::array();
  for (const auto& [lo, hi] : cfg.arm.joint_limits) limits.push_back({lo, hi});
  j["arm"]["joint_limits"] = limits;
  j["arm"]["link_radii"] = cfg.arm.link_radii;
  j["arm"]["home"] = std::vector<double>(cfg.arm.home.data(), cfg.arm.home.data() + kNumJoints);
  j["mandrel_in_base"] = pose_to_json(cfg.mandrel_in_base);
  json spheres = json::array();
  for (const auto& s : cfg.scene.spheres)
    spheres.push_back({{"center", {s.center.x(), s.center.y(), s.center.z()}}, {"radius", s.radius}});
  json boxes = json::array();
  for (const auto& b : cfg.scene.boxes)
    boxes.push_back({{"min", {b.min.x(), b.min.y(), b.min.z()}},
                     {"max", {b.max.x(), b.max.y(), b.max.z()}}});
  json cylinders = json::array();
  for (const auto& c : cfg.scene.cylinders)
    cylinders.push_back({{"base", {c.base.x(), c.base.y(), c.base.z()}},
                         {"axis", {c.axis.x(), c.axis.y(), c.axis.z()}},
                         {"radius", c.radius},
                         {"height", c.height}});
  j["scene"] = {{"spheres", spheres}, {"boxes", boxes}, {"cylinders", cylinders}};
  dump_json(path, j);
}

ArmSceneConfig read_arm_scene_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  ArmSceneConfig cfg;
  const auto& arm = j.at("arm");
  const auto& dh = arm.at("dh");
  if (dh.size() != kNumJoints) throw ValidationError(path.string() + ": need 7 DH rows");
  for (int i = 0; i < kNumJoints; ++i) {
    cfg.arm.dh[i] = {dh[i].at("d").get<double>(), dh[i].at("a").get<double>(),
                     dh[i].at("alpha").get<double>(), dh[i].at("theta0").get<double>()};
    cfg.arm.joint_limits[i] = {arm.at("joint_limits")[i][0].get<double>(),
                               arm.at("joint_limits")[i][1].get<double>()};
    if (cfg.arm.joint_limits[i].first >= cfg.arm.joint_limits[i].second)
      throw ValidationError(path.string() + ": joint limit min must be below max");
    cfg.arm.link_radii[i] = arm.at("link_radii")[i].get<double>();
    if (cfg.arm.link_radii[i] <= 0.0)
      throw ValidationError(path.string() + ": link radii must be positive");
    cfg.arm.home[i] = arm.at("home")[i].get<double>();
  }
  cfg.mandrel_in_base = json_to_pose(j.at("mandrel_in_base"));
  if (j.contains("scene")) {
    const auto& scene = j.at("scene");
    for (const auto& s : scene.value("spheres", json::array())) {
      SphereObstacle o;
      for (int i = 0; i < 3; ++i) o.center[i] = s.at("center")[i].get<double>();
      o.radius = s.at("radius").get<double>();
      if (o.radius <= 0.0) throw ValidationError(path.string() + ": sphere radius must be positive");
      cfg.scene.spheres.push_back(o);
    }
    for (const auto& b : scene.value("boxes", json::array())) {
      BoxObstacle o;
      for (int i = 0; i < 3; ++i) o.min[i] = b.at("min")[i].get<double>();
      for (int i = 0; i < 3; ++i) o.max[i] = b.at("max")[i].get<double>();
      if ((o.max - o.min).minCoeff() <= 0.0)
        throw ValidationError(path.string() + ": box extents must be positive");
      cfg.scene.boxes.push_back(o);
    }
    for (const auto& c : scene.value("cylinders", json::array())) {
      CylinderObstacle o;
      for (int i = 0; i < 3; ++i) o.base[i] = c.at("base")[i].get<double>();
      for (int i = 0; i < 3; ++i) o.axis[i] = c.at("axis")[i].get<double>();
      o.radius = c.at("radius").get<double>();
      o.height = c.at("height").get<double>();
      if (o.radius <= 0.0 || o.height <= 0.0 || o.axis.norm() < 1e-9)
        throw ValidationError(path.string() + ": bad cylinder");
      cfg.scene.cylinders.push_back(o);
    }
  }
  return cfg;
}

Checkpoint snapshot(const TrainContext& ctx) {
  Checkpoint cp;
  cp.layer_sizes = ctx.net.layer_sizes();
  cp.weights = ctx.net.weights();
  cp.biases = ctx.net.biases();
  if (ctx.target) {
    cp.has_target = true;
    cp.target_weights = ctx.target->weights();
    cp.target_biases = ctx.target->biases();
  }
  std::ostringstream rng_out;
  rng_out << ctx.rng;
  cp.rng_state = rng_out.str();
  cp.train_steps = ctx.train_steps;
  cp.episodes_done = ctx.episodes_done;
  cp.envelope_violations = ctx.envelope_violations;
  cp.action_set_mismatches = ctx.action_set_mismatches;
  cp.cfg = ctx.cfg;
  return cp;
}

void restore(const Checkpoint& cp, TrainContext& ctx) {
  if (cp.layer_sizes != ctx.net.layer_sizes())
    throw ValidationError("checkpoint layer sizes do not match the network");
  ctx.net.weights() = cp.weights;
  ctx.net.biases() = cp.biases;
  if (cp.has_target) {
    if (!ctx.target) ctx.target = ctx.net;
    ctx.target->weights() = cp.target_weights;
    ctx.target->biases() = cp.target_biases;
  }
  std::istringstream rng_in(cp.rng_state);
  rng_in >> ctx.rng;
  ctx.train_steps = cp.train_steps;
  ctx.episodes_done = cp.episodes_done;
  ctx.envelope_violations = cp.envelope_violations;
  ctx.action_set_mismatches = cp.action_set_mismatches;
}

namespace {

json train_config_to_json(const TrainConfig& cfg) {
  return json{{"alpha", cfg.alpha},
              {"gamma", cfg.gamma},
              {"num_episodes", cfg.num_episodes},
              {"num_steps", cfg.num_steps},
              {"batch", cfg.batch},
              {"epsilon0", cfg.epsilon0},
              {"capacity", cfg.capacity},
              {"seed", cfg.seed},
              {"target_network", cfg.target_network},
              {"target_sync_every", cfg.target_sync_every},
              {"translation_only_state", cfg.translation_only_state}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  cfg.alpha = j.at("alpha").get<double>();
  cfg.gamma = j.at("gamma").get<double>();
  cfg.num_episodes = j.at("num_episodes").get<int>();
  cfg.num_steps = j.at("num_steps").get<int>();
  cfg.batch = j.at("batch").get<int>();
  cfg.epsilon0 = j.at("epsilon0").get<double>();
  cfg.capacity = j.at("capacity").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.target_network = j.at("target_network").get<bool>();
  cfg.target_sync_every = j.at("target_sync_every").get<int>();
  cfg.translation_only_state = j.at("translation_only_state").get<bool>();
  return cfg;
}

}  // namespace

void write_checkpoint_json(const std::filesystem::path& path, const Checkpoint& cp) {
  json j;
  j["layer_sizes"] = cp.layer_sizes;
  json ws = json::array(), bs = json::array();
  for (const auto& w : cp.weights) ws.push_back(mat_to_json(w));
  for (const auto& b : cp.biases) bs.push_back(vec_to_json(b));
  j["weights"] = ws;
  j["biases"] = bs;
  j["has_target"] = cp.has_target;
  if (cp.has_target) {
    json tw = json::array(), tb = json::array();
    for (const auto& w : cp.target_weights) tw.push_back(mat_to_json(w));
    for (const auto& b : cp.target_biases) tb.push_back(vec_to_json(b));
    j["target_weights"] = tw;
    j["target_biases"] = tb;
  }
  j["rng_state"] = cp.rng_state;
  j["train_steps"] = cp.train_steps;
  j["episodes_done"] = cp.episodes_done;
  j["envelope_violations"] = cp.envelope_violations;
  j["action_set_mismatches"] = cp.action_set_mismatches;
  j["config"] = train_config_to_json(cp.cfg);
  dump_json(path, j);
}

Checkpoint read_checkpoint_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  Checkpoint cp;
  cp.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  for (const auto& w : j.at("weights")) cp.weights.push_back(json_to_mat(w));
  for (const auto& b : j.at("biases")) cp.biases.push_back(json_to_vec(b));
  cp.has_target = j.at("has_target").get<bool>();
  if (cp.has_target) {
    for (const auto& w : j.at("target_weights")) cp.target_weights.push_back(json_to_mat(w));
    for (const auto& b : j.at("target_biases")) cp.target_biases.push_back(json_to_vec(b));
  }
  cp.rng_state = j.at("rng_state").get<std::string>();
  cp.train_steps = j.at("train_steps").get<std::uint64_t>();
  cp.episodes_done = j.at("episodes_done").get<int>();
  cp.envelope_violations = j.at("envelope_violations").get<std::uint64_t>();
  cp.action_set_mismatches = j.at("action_set_mismatches").get<std::uint64_t>();
  cp.cfg = train_config_from_json(j.at("config"));
  return cp;
}

void write_buffer_json(const std::filesystem::path& path, const ExperienceBuffer& buffer) {
  json j;
  j["capacity"] = buffer.capacity();
  j["total_pushed"] = buffer.total_pushed();
  json items = json::array();
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const Transition& t = buffer.at(i);
    items.push_back({{"s", vec_to_json(t.s)},
                     {"a", t.a},
                     {"s_next", vec_to_json(t.s_next)},
                     {"r", t.r},
                     {"terminal", t.terminal}});
  }
  j["items"] = items;
  dump_json(path, j);
}

void read_buffer_json(const std::filesystem::path& path, ExperienceBuffer& buffer) {
  const json j = load_json(path);
  if (j.at("capacity").get<std::size_t>() != buffer.capacity())
    throw ValidationError(path.string() + ": buffer capacity mismatch");
  for (const auto& item : j.at("items")) {
    Transition t;
    t.s = json_to_vec(item.at("s"));
    t.a = item.at("a").get<int>();
    t.s_next = json_to_vec(item.at("s_next"));
    t.r = item.at("r").get<double>();
    t.terminal = item.at("terminal").get<bool>();
    buffer.push(std::move(t));
  }
}

void append_episode_log(const std::filesystem::path& path, const EpisodeStats& stats) {
  const bool fresh = !std::filesystem::exists(path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ParseError("cannot write " + path.string());
  if (fresh) out << "episode,return,steps,collisions,epsilon\n";
  out << stats.episode << ',' << format_double(stats.ret) << ',' << stats.steps << ','
      << stats.collisions << ',' << format_double(stats.epsilon) << '\n';
}

void ensure_episode_log(const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) return;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << "episode,return,steps,collisions,epsilon\n";
}

void write_reports_csv(const std::filesystem::path& path,
                       const std::vector<TrajectoryReport>& reports) {
  auto out = open_out(path);
  out << "label,pose_length_m,joint_length_deg,smoothness_deg\n";
  for (const auto& r : reports)
    out << r.label << ',' << format_double(r.pose_length_m) << ','
        << format_double(r.joint_length_deg) << ',' << format_double(r.smoothness_deg) << '\n';
}

void write_reports_json(const std::filesystem::path& path,
                        const std::vector<TrajectoryReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports)
    arr.push_back({{"label", r.label},
                   {"pose_length_m", r.pose_length_m},
                   {"joint_length_deg", r.joint_length_deg},
                   {"smoothness_deg", r.smoothness_deg}});
  dump_json(path, arr);
}

}  // namespace csrl
