#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "gatamp/grrt.hpp"
#include "gatamp/scene.hpp"
#include "gatamp/select.hpp"

namespace gatamp {

enum class SegmentKind { Transit, Approach, Mate, Retract, Grip, Release };

inline const char* to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Transit: return "transit";
        case SegmentKind::Approach: return "approach";
        case SegmentKind::Mate: return "mate";
        case SegmentKind::Retract: return "retract";
        case SegmentKind::Grip: return "grip";
        case SegmentKind::Release: return "release";
    }
    return "?";
}

inline SegmentKind segment_kind_from_string(const std::string& s) {
    if (s == "transit") return SegmentKind::Transit;
    if (s == "approach") return SegmentKind::Approach;
    if (s == "mate") return SegmentKind::Mate;
    if (s == "retract") return SegmentKind::Retract;
    if (s == "grip") return SegmentKind::Grip;
    if (s == "release") return SegmentKind::Release;
    throw invalid_argument_error("unknown segment kind: " + s);
}

/// One motion or attachment event. Motion segments carry dual-arm waypoints
/// (only `arm` moves). GRIP attaches object_id to `arm` at pose_in_hand;
/// RELEASE transfers the object into the holding arm's aggregate, with
/// pose_in_hand expressed in the holding tool frame.
struct Segment {
    SegmentKind kind = SegmentKind::Transit;
    Arm arm = Arm::Right;
    std::vector<DualJointConfig> waypoints;
    double duration_s = 0.0;
    std::string object_id;
    Pose pose_in_hand;
};

struct ProcessTimings {
    double cd1 = 0, ik1 = 0, rrt1 = 0;  // first part pair
    double cd2 = 0, ik2 = 0, rrt2 = 0;  // remaining parts

    double total() const { return cd1 + ik1 + rrt1 + cd2 + ik2 + rrt2; }
};

struct StageRecord {
    int part_index = -1;  // part mated in this stage (1 = first pair)
    int pose_index = -1;  // index into GaSpaces::all_poses
    AssemblyPose pose;
    SelectionReport selection;
    int poses_tried = 0;
};

enum class PlanOutcome { Success, RegraspNeeded, Failure };

inline const char* to_string(PlanOutcome o) {
    switch (o) {
        case PlanOutcome::Success: return "success";
        case PlanOutcome::RegraspNeeded: return "regrasp-needed";
        case PlanOutcome::Failure: return "failure";
    }
    return "?";
}

struct PlanResult {
    PlanOutcome outcome = PlanOutcome::Failure;
    std::vector<Segment> segments;
    ProcessTimings timings;
    std::vector<StageRecord> stages;
    std::string message;
};

struct PlannerParams {
    int selection_order = 2;
    OrientationBasis basis{PolyhedronBasis::Octahedron, 6};
    int n_positions = 4;
    int selection_budget = 2000;
    RRTParams rrt;
    int smoothing_attempts = 40;
    bool shuffle_candidates = false;
    std::uint64_t seed = 0;
};

/// Builds the discretized G-A spaces: per-object-per-gripper grasp lists and
/// the assembly pose grid prefiltered by the first mate's gravity constraint.
inline GaSpaces build_ga_spaces(const Scene& scene, const PlannerParams& params) {
    if (scene.task.parts.size() < 2) {
        throw config_error("assembly task needs at least 2 parts");
    }
    GaSpaces spaces;
    spaces.grasps.resize(scene.objects.size());
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        for (Arm arm : {Arm::Right, Arm::Left}) {
            auto grasps =
                synthesize_grasps(scene.objects[i].mesh, scene.robot.gripper(arm),
                                  scene.grasp_params, derive_seed(params.seed, 0x96, i));
            if (grasps.empty()) {
                throw config_error("no grasps synthesized for object '" + scene.objects[i].id +
                                   "'");
            }
            spaces.grasps[i][arm == Arm::Right ? 0 : 1] = std::move(grasps);
        }
    }
    spaces.all_poses =
        enumerate_assembly_poses(scene.region, params.n_positions, params.basis, params.seed);
    const TaskPart& first_mate = scene.task.parts[1];
    spaces.poses =
        gravity_prefilter(spaces.all_poses, first_mate.assembly_dir, first_mate.threshold_deg);
    return spaces;
}

namespace detail {

class Timer {
  public:
    explicit Timer(double& sink) : sink_(sink), t0_(std::chrono::steady_clock::now()) {}
    ~Timer() {
        sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    double& sink_;
    std::chrono::steady_clock::time_point t0_;
};

struct PlanState {
    DualJointConfig current;
    Attachment holding_payload;  // finished-part pieces in the holding tool frame
    Pose finished_in_hand;       // assembly frame in the holding tool frame
    StabilityModel stability;
    std::vector<char> on_table;  // per scene object
    int current_pose_index = -1;
};

inline std::vector<PosedShape> tabled_world(const Scene& scene, const std::vector<char>& on_table,
                                            int skip_object = -1) {
    std::vector<PosedShape> world = scene.static_world;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (!on_table[i] || static_cast<int>(i) == skip_object) continue;
        const auto posed = scene.objects[i].posed(scene.objects[i].initial_pose);
        world.insert(world.end(), posed.begin(), posed.end());
    }
    return world;
}

inline double config_distance(const DualJointConfig& a, const DualJointConfig& b) {
    double d2 = 0;
    for (std::size_t i = 0; i < a.right.size(); ++i) {
        d2 += (a.right[i] - b.right[i]) * (a.right[i] - b.right[i]);
    }
    for (std::size_t i = 0; i < a.left.size(); ++i) {
        d2 += (a.left[i] - b.left[i]) * (a.left[i] - b.left[i]);
    }
    return std::sqrt(d2);
}

inline Segment motion_segment(SegmentKind kind, Arm arm, std::vector<DualJointConfig> waypoints) {
    Segment s;
    s.kind = kind;
    s.arm = arm;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        s.duration_s += config_distance(waypoints[i], waypoints[i + 1]);  // 1 rad/s nominal
    }
    s.waypoints = std::move(waypoints);
    return s;
}

// accepted segments must already satisfy a 10x-finer revalidation, so that
// certification at finer resolutions cannot flip a delivered plan
inline constexpr double kFineCheckFactor = 0.1;

/// Straight joint-space motion, densified at `resolution` and checked at the
/// finer certification resolution.
inline std::optional<std::vector<DualJointConfig>> linear_motion(const DualJointConfig& from,
                                                                 const DualJointConfig& to,
                                                                 const PlanContext& ctx,
                                                                 double resolution) {
    MovingSpace space{ctx.robot, true, true, from};
    const Eigen::VectorXd a = space.to_vec(from);
    const Eigen::VectorXd b = space.to_vec(to);
    if (!node_valid(from, ctx)) return std::nullopt;
    if (!edge_valid(space, a, b, ctx, resolution * kFineCheckFactor)) return std::nullopt;
    const double span = (b - a).cwiseAbs().maxCoeff();
    const int steps = std::max(1, static_cast<int>(std::ceil(span / resolution)));
    std::vector<DualJointConfig> waypoints;
    waypoints.reserve(steps + 1);
    for (int s = 0; s <= steps; ++s) {
        waypoints.push_back(space.from_vec(a + (b - a) * (static_cast<double>(s) / steps)));
    }
    return waypoints;
}

/// plan_rrt with endpoint pre-checks (invalid endpoints mean "this candidate
/// fails", not a caller bug), shortcut smoothing, and a fine-resolution
/// certification pass over the returned path.
inline std::optional<MotionPath> plan_rrt_guarded(const DualJointConfig& start,
                                                  const DualJointConfig& goal,
                                                  const PlanContext& ctx,
                                                  const PlannerParams& params) {
    if (!node_valid(start, ctx) || !node_valid(goal, ctx)) return std::nullopt;
    auto path = plan_rrt(start, goal, ctx, params.rrt);
    if (!path) return std::nullopt;

    const double fine = params.rrt.edge_resolution * kFineCheckFactor;
    if (params.smoothing_attempts > 0) {
        MotionPath smoothed = smooth_path(*path, ctx, params.smoothing_attempts, params.rrt.seed);
        if (path_validate(smoothed, ctx, fine)) {
            smoothed.checked_resolution = fine;
            return smoothed;
        }
    }
    if (!path_validate(*path, ctx, fine)) return std::nullopt;  // grazed between coarse steps
    path->checked_resolution = fine;
    return path;
}

inline DualJointConfig with_arm(const DualJointConfig& q, Arm arm, const JointConfig& qa) {
    DualJointConfig out = q;
    (arm == Arm::Right ? out.right : out.left) = qa;
    return out;
}

/// Base validity context for the current plan state: statics + tabled
/// objects, the holding arm's payload, and the accumulated gravity model.
inline PlanContext state_context(const Scene& scene, const PlanState& state, Arm moving,
                                 int skip_object = -1) {
    PlanContext ctx;
    ctx.robot = &scene.robot;
    ctx.world = tabled_world(scene, state.on_table, skip_object);
    const Arm holding = scene.task.holding_arm;
    (holding == Arm::Right ? ctx.right_attachment : ctx.left_attachment) = state.holding_payload;
    if (!state.stability.empty()) {
        ctx.stability = state.stability;
        ctx.holding_arm = holding;
        ctx.finished_in_hand = state.finished_in_hand;
    }
    ctx.move_right = moving == Arm::Right;
    ctx.move_left = moving == Arm::Left;
    return ctx;
}

/// Transit to the pregrasp, straight approach, grip, then transit with the
/// payload to the arm's assembly-side config. Mutates state on success only.
inline bool pick_and_carry(const Scene& scene, const PlannerParams& params, PlanState& state,
                           Arm arm, const TaskPart& part, const GraspConfig& grasp,
                           const CandidateEntry& entry, std::vector<Segment>& out) {
    const SceneObject& object = scene.object_of(part);
    std::vector<Segment> segments;

    // to pregrasp; the part is still a world obstacle
    PlanContext ctx = state_context(scene, state, arm);
    const DualJointConfig q_pregrasp = with_arm(state.current, arm, entry.q_lift);
    auto transit = plan_rrt_guarded(state.current, q_pregrasp, ctx, params);
    if (!transit) return false;
    segments.push_back(motion_segment(SegmentKind::Transit, arm, std::move(transit->waypoints)));

    const DualJointConfig q_pick = with_arm(state.current, arm, entry.q_pick);
    auto approach = linear_motion(q_pregrasp, q_pick, ctx, params.rrt.edge_resolution);
    if (!approach) return false;
    segments.push_back(motion_segment(SegmentKind::Approach, arm, std::move(*approach)));

    Segment grip;
    grip.kind = SegmentKind::Grip;
    grip.arm = arm;
    grip.duration_s = 0.5;
    grip.object_id = object.id;
    grip.pose_in_hand = grasp.hand_pose_in_object.inverse();
    segments.push_back(grip);

    // carry to the assembly-side config with the payload attached
    PlanState next = state;
    next.on_table[static_cast<std::size_t>(part.object_index)] = 0;
    next.current = q_pick;
    const Attachment payload = object.attachment_for_grasp(grasp.hand_pose_in_object);

    PlanContext carry_ctx = state_context(scene, next, arm);
    (arm == Arm::Right ? carry_ctx.right_attachment : carry_ctx.left_attachment) = payload;
    const DualJointConfig q_carry = with_arm(q_pick, arm, entry.q_assembly);
    auto carry = plan_rrt_guarded(q_pick, q_carry, carry_ctx, params);
    if (!carry) return false;
    segments.push_back(motion_segment(SegmentKind::Transit, arm, std::move(carry->waypoints)));

    next.current = q_carry;
    state = std::move(next);
    out.insert(out.end(), segments.begin(), segments.end());
    return true;
}

/// Straight insertion along the assembly direction, release into the holding
/// aggregate, and straight retract along the hand approach axis.
inline bool mate_release_retract(const Scene& scene, const PlannerParams& params,
                                 PlanState& state, const TaskPart& part, const GraspConfig& grasp,
                                 const Pose& assembly, int pose_index,
                                 std::vector<Segment>& out) {
    const Arm arm = scene.task.placing_arm();
    const SceneObject& object = scene.object_of(part);
    const KinematicChain& chain = scene.robot.chain(arm);
    std::vector<Segment> segments;

    PlanState next = state;
    const Attachment payload = object.attachment_for_grasp(grasp.hand_pose_in_object);

    PlanContext ctx = state_context(scene, next, arm);
    (arm == Arm::Right ? ctx.right_attachment : ctx.left_attachment) = payload;

    // mate config: hand pose with the object exactly at its mate pose
    const Pose hand_mate = assembly * part.mate_pose * grasp.hand_pose_in_object;
    IkOptions opts;
    opts.seed = derive_seed(params.seed, 0x3a, static_cast<std::uint64_t>(pose_index));
    const JointConfig& q_premate = arm == Arm::Right ? next.current.right : next.current.left;
    const auto q_mate_arm = ik(chain, hand_mate, q_premate, opts);
    if (!q_mate_arm) return false;
    const DualJointConfig q_mate = with_arm(next.current, arm, *q_mate_arm);
    auto mate = linear_motion(next.current, q_mate, ctx, params.rrt.edge_resolution);
    if (!mate) return false;
    segments.push_back(motion_segment(SegmentKind::Mate, arm, std::move(*mate)));
    next.current = q_mate;

    // release: the part joins the holding hand's aggregate at its nominal
    // mate pose (exact algebra, independent of IK residual)
    const Pose part_in_holding_hand = next.finished_in_hand * part.mate_pose;
    Segment release;
    release.kind = SegmentKind::Release;
    release.arm = arm;
    release.duration_s = 0.5;
    release.object_id = object.id;
    release.pose_in_hand = part_in_holding_hand;
    segments.push_back(release);
    for (const auto& piece : object.collision) {
        next.holding_payload.pieces.push_back({piece, part_in_holding_hand});
    }

    // retract along the hand approach axis with the hand now empty
    PlanContext retract_ctx = state_context(scene, next, arm);
    const Pose hand_now = fk(chain, *q_mate_arm);
    const Pose hand_back(hand_now.position -
                             hand_now.apply_direction(Vec3(0, 0, scene.approach_length)),
                         hand_now.rotation);
    opts.seed = derive_seed(params.seed, 0x3b, static_cast<std::uint64_t>(pose_index));
    const auto q_retract_arm = ik(chain, hand_back, *q_mate_arm, opts);
    if (!q_retract_arm) return false;
    const DualJointConfig q_retract = with_arm(q_mate, arm, *q_retract_arm);
    auto retract = linear_motion(q_mate, q_retract, retract_ctx, params.rrt.edge_resolution);
    if (!retract) return false;
    segments.push_back(motion_segment(SegmentKind::Retract, arm, std::move(*retract)));
    next.current = q_retract;

    // the mated part's direction now constrains every later reorientation
    next.stability.add(part.assembly_dir, part.threshold_deg);
    next.current_pose_index = pose_index;

    state = std::move(next);
    out.insert(out.end(), segments.begin(), segments.end());
    return true;
}

inline int index_in_all(const GaSpaces& spaces, const AssemblyPose& ap) {
    for (std::size_t i = 0; i < spaces.all_poses.size(); ++i) {
        const auto& c = spaces.all_poses[i];
        if (c.position_index == ap.position_index && c.vertex_index == ap.vertex_index &&
            c.roll_index == ap.roll_index) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

inline bool plan_first_pair(const Scene& scene, const GaSpaces& spaces,
                            const PlannerParams& params, PlanState& state, PlanResult& result) {
    const Arm holding = scene.task.holding_arm;
    const Arm placing = scene.task.placing_arm();
    const TaskPart& part1 = scene.task.parts[0];
    const TaskPart& part2 = scene.task.parts[1];

    int poses_tried = 0;
    for (const AssemblyPose& ap : spaces.poses) {
        ++poses_tried;
        const Pose assembly = assembly_world_pose(ap);
        const int pose_index = index_in_all(spaces, ap);

        SelectionQuery query;
        query.scene = &scene;
        query.spaces = &spaces;
        query.part1 = 0;
        query.part2 = 1;
        query.assembly = assembly;
        query.budget = params.selection_budget;
        query.seed = derive_seed(params.seed, 0x51, static_cast<std::uint64_t>(pose_index));
        query.shuffle = params.shuffle_candidates;

        SelectionReport report;
        std::optional<CandidatePair> pair;
        if (params.selection_order == 1) {
            pair = select_order1(query, report);
        } else {
            auto pairs = select_order2(query, report);
            if (!pairs.empty()) pair = pairs.front();
        }
        result.timings.cd1 += report.cd_seconds + report.pairing_seconds;
        result.timings.ik1 += report.ik_seconds;
        if (!pair) continue;

        Timer rrt_timer(result.timings.rrt1);
        PlanState trial = state;
        std::vector<Segment> segments;
        const auto& grasp1 = spaces.grasps_for(part1.object_index, holding)[pair->part1.grasp_index];
        const auto& grasp2 = spaces.grasps_for(part2.object_index, placing)[pair->part2.grasp_index];

        if (!pick_and_carry(scene, params, trial, holding, part1, grasp1, pair->part1, segments)) {
            continue;
        }
        // the freshly gripped part becomes the root of the finished assembly
        trial.holding_payload = scene.object_of(part1).attachment_for_grasp(
            grasp1.hand_pose_in_object);
        trial.finished_in_hand = grasp1.hand_pose_in_object.inverse() * part1.mate_pose.inverse();

        if (!pick_and_carry(scene, params, trial, placing, part2, grasp2, pair->part2, segments)) {
            continue;
        }
        if (!mate_release_retract(scene, params, trial, part2, grasp2, assembly, pose_index,
                                  segments)) {
            continue;
        }

        state = std::move(trial);
        result.segments.insert(result.segments.end(), segments.begin(), segments.end());
        StageRecord record;
        record.part_index = 1;
        record.pose_index = pose_index;
        record.pose = ap;
        record.selection = report;
        record.poses_tried = poses_tried;
        result.stages.push_back(std::move(record));
        return true;
    }
    return false;
}

inline bool plan_next_part(const Scene& scene, const GaSpaces& spaces, const PlannerParams& params,
                           int part_index, PlanState& state, PlanResult& result) {
    const Arm holding = scene.task.holding_arm;
    const Arm placing = scene.task.placing_arm();
    const TaskPart& part = scene.task.parts[static_cast<std::size_t>(part_index)];
    const KinematicChain& holding_chain = scene.robot.chain(holding);

    // stage pose list: every mated direction so far plus the incoming one
    std::vector<AssemblyPose> poses = spaces.all_poses;
    for (int j = 1; j <= part_index; ++j) {
        const TaskPart& mated = scene.task.parts[static_cast<std::size_t>(j)];
        poses = gravity_prefilter(poses, mated.assembly_dir, mated.threshold_deg);
    }
    // current anchor pose first: staying put skips the reorientation
    std::vector<int> order(poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const bool a_cur =
            index_in_all(spaces, poses[static_cast<std::size_t>(a)]) == state.current_pose_index;
        const bool b_cur =
            index_in_all(spaces, poses[static_cast<std::size_t>(b)]) == state.current_pose_index;
        return a_cur > b_cur;
    });

    int poses_tried = 0;
    for (int oi : order) {
        const AssemblyPose& ap = poses[static_cast<std::size_t>(oi)];
        const int pose_index = index_in_all(spaces, ap);
        ++poses_tried;
        const Pose assembly = assembly_world_pose(ap);

        // the holding arm re-anchors the finished part at this pose
        const Pose hold_target = assembly * state.finished_in_hand.inverse();
        IkOptions opts;
        opts.seed = derive_seed(params.seed, 0x44, static_cast<std::uint64_t>(pose_index),
                                static_cast<std::uint64_t>(part_index));
        std::optional<JointConfig> q_hold_arm;
        {
            Timer t(result.timings.ik2);
            const JointConfig& seed_q =
                holding == Arm::Right ? state.current.right : state.current.left;
            q_hold_arm = ik(holding_chain, hold_target, seed_q, opts);
            if (q_hold_arm &&
                arm_collides(scene.robot, holding, *q_hold_arm,
                             tabled_world(scene, state.on_table), state.holding_payload)) {
                q_hold_arm.reset();
            }
        }
        if (!q_hold_arm) continue;
        const DualJointConfig q_hold = with_arm(state.current, holding, *q_hold_arm);

        // gravity-constrained reorientation of the finished part
        PlanState trial = state;
        std::vector<Segment> segments;
        {
            Timer t(result.timings.rrt2);
            PlanContext ctx = state_context(scene, trial, holding);
            auto reorient = plan_rrt_guarded(trial.current, q_hold, ctx, params);
            if (!reorient) continue;
            segments.push_back(
                motion_segment(SegmentKind::Transit, holding, std::move(reorient->waypoints)));
        }
        trial.current = q_hold;
        trial.current_pose_index = pose_index;

        // select a grasp for the incoming part against the re-anchored assembly
        SelectionReport report;
        std::vector<CandidateEntry> entries;
        {
            detail::PartSpec spec;
            spec.arm = placing;
            spec.object_index = part.object_index;
            spec.init_pose = scene.object_of(part).initial_pose;
            spec.assembly_object_pose = premate_object_pose(assembly, part);
            spec.pick_world = tabled_world(scene, trial.on_table, part.object_index);
            // the held finished part and the holding hand are known obstacles
            for (const auto& piece : trial.holding_payload.pieces) {
                spec.pick_world.push_back({piece.shape, hold_target * piece.pose});
            }
            spec.pick_world.push_back(
                {scene.robot.gripper(holding).hand_collision_shape, hold_target});
            spec.assembly_world = spec.pick_world;

            SelectionQuery query;
            query.scene = &scene;
            query.spaces = &spaces;
            query.assembly = assembly;
            query.budget = params.selection_budget;
            query.seed = derive_seed(params.seed, 0x52, static_cast<std::uint64_t>(pose_index),
                                     static_cast<std::uint64_t>(part_index));
            query.shuffle = params.shuffle_candidates;
            const auto cand_order = candidate_order(
                spaces.grasps_for(part.object_index, placing).size(), query, part_index);
            entries = feasible_entries(query, spec, cand_order, report.part2, report);
        }
        result.timings.cd2 += report.cd_seconds + report.pairing_seconds;
        result.timings.ik2 += report.ik_seconds;

        // first entry whose combined configuration is collision-free
        const auto& grasp_list = spaces.grasps_for(part.object_index, placing);
        bool placed = false;
        for (const auto& entry : entries) {
            bool mutual_ok;
            {
                Timer t(result.timings.cd2);
                const Attachment part_payload = scene.object_of(part).attachment_for_grasp(
                    grasp_list[entry.grasp_index].hand_pose_in_object);
                const DualJointConfig q_both = with_arm(q_hold, placing, entry.q_assembly);
                const Attachment& right_att =
                    holding == Arm::Right ? trial.holding_payload : part_payload;
                const Attachment& left_att =
                    holding == Arm::Right ? part_payload : trial.holding_payload;
                mutual_ok = !robot_collides(scene.robot, q_both,
                                            tabled_world(scene, trial.on_table, part.object_index),
                                            right_att, left_att);
            }
            if (!mutual_ok) continue;

            Timer t(result.timings.rrt2);
            PlanState attempt = trial;
            std::vector<Segment> attempt_segments = segments;
            const GraspConfig& grasp = grasp_list[entry.grasp_index];
            if (!pick_and_carry(scene, params, attempt, placing, part, grasp, entry,
                                attempt_segments)) {
                continue;
            }
            if (!mate_release_retract(scene, params, attempt, part, grasp, assembly, pose_index,
                                      attempt_segments)) {
                continue;
            }
            state = std::move(attempt);
            result.segments.insert(result.segments.end(), attempt_segments.begin(),
                                   attempt_segments.end());
            StageRecord record;
            record.part_index = part_index;
            record.pose_index = pose_index;
            record.pose = ap;
            record.selection = report;
            record.poses_tried = poses_tried;
            result.stages.push_back(std::move(record));
            placed = true;
            break;
        }
        if (placed) return true;
    }
    return false;
}

}  // namespace detail

/// Full workflow: build G-A spaces, find the first pair with backtracking
/// over assembly poses, then mate the remaining parts under the growing
/// gravity model. Deterministic for a given params.seed.
inline PlanResult plan_assembly(const Scene& scene, const GaSpaces& spaces,
                                const PlannerParams& params) {
    PlanResult result;
    if (spaces.poses.empty()) {
        result.outcome = PlanOutcome::Failure;
        result.message = "no assembly poses survive the gravity prefilter";
        return result;
    }

    detail::PlanState state;
    state.current = scene.robot.home;
    state.on_table.assign(scene.objects.size(), 1);

    if (!detail::plan_first_pair(scene, spaces, params, state, result)) {
        result.outcome = PlanOutcome::RegraspNeeded;
        result.message = "assembly poses exhausted for the first pair";
        return result;
    }
    for (int k = 2; k < static_cast<int>(scene.task.parts.size()); ++k) {
        if (!detail::plan_next_part(scene, spaces, params, k, state, result)) {
            result.outcome = PlanOutcome::RegraspNeeded;
            result.message =
                "assembly poses exhausted for part '" +
                scene.task.parts[static_cast<std::size_t>(k)].object_id + "'";
            return result;
        }
    }
    result.outcome = PlanOutcome::Success;
    return result;
}

inline PlanResult plan_assembly(const Scene& scene, const PlannerParams& params) {
    const GaSpaces spaces = build_ga_spaces(scene, params);
    return plan_assembly(scene, spaces, params);
}

}  // namespace gatamp
