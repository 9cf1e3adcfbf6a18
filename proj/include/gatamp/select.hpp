#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <vector>

#include "gatamp/scene.hpp"

namespace gatamp {

/// One feasible grasp of one object: world hand poses and IK solutions at the
/// initial (pick) pose and at the assembly-side pose.
struct CandidateEntry {
    int grasp_index = -1;
    Pose hand_pick;      // world hand pose at the object's initial pose
    Pose hand_assembly;  // world hand pose at the assembly-side target
    JointConfig q_pick;
    JointConfig q_lift;      // hand backed off along -z by the approach length
    JointConfig q_assembly;  // config at hand_assembly, payload attached
};

struct CandidatePair {
    CandidateEntry part1;  // holding arm
    CandidateEntry part2;  // placing arm
};

/// Filter-funnel counts and stage timings for one selection call.
struct SelectionReport {
    struct PartCounts {
        int total = 0;
        int cd_init = 0;
        int cd_assembly = 0;
        int intersection = 0;
        int ik_feasible = 0;
    };
    PartCounts part1, part2;
    long pairs_checked = 0;
    long pairs_found = 0;
    int part1_grasps_examined = 0;  // order 1: how deep the part-1 walk went
    int ik_attempts = 0;
    bool budget_exhausted = false;
    double cd_seconds = 0.0;
    double ik_seconds = 0.0;
    double pairing_seconds = 0.0;
};

/// Keeps grasps whose posed hand shape clears the given world. The object
/// being grasped must not be part of `world` (self-grasp is allowed).
inline std::vector<int> hand_cd_filter(const std::vector<GraspConfig>& grasps,
                                       const ConvexShape& hand_shape, const Pose& object_pose,
                                       const std::vector<PosedShape>& world) {
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(grasps.size()); ++i) {
        const Pose hand_world = object_pose * grasps[i].hand_pose_in_object;
        bool free = true;
        for (const auto& obstacle : world) {
            if (collide(hand_shape, hand_world, obstacle.shape, obstacle.pose)) {
                free = false;
                break;
            }
        }
        if (free) kept.push_back(i);
    }
    return kept;
}

/// Grasps (by id in the object's grasp list) present in both sets.
inline std::vector<int> grasp_intersection(const std::vector<int>& pick_set,
                                           const std::vector<int>& assembly_set) {
    std::vector<int> a = pick_set, b = assembly_set, out;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

namespace detail {

class StageClock {
  public:
    explicit StageClock(double& sink) : sink_(sink), t0_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    double& sink_;
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace detail

/// Inputs for selecting the first grasp pair at one assembly pose.
struct SelectionQuery {
    const Scene* scene = nullptr;
    const GaSpaces* spaces = nullptr;
    int part1 = 0;
    int part2 = 1;
    Pose assembly;  // world pose of the assembly frame
    int budget = 2000;
    std::uint64_t seed = 0;
    bool shuffle = false;  // randomize candidate order instead of quality order
};

namespace detail {

struct PartSpec {
    Arm arm;
    int object_index;
    Pose init_pose;             // where the object is picked
    Pose assembly_object_pose;  // world object pose at the assembly-side target
    std::vector<PosedShape> pick_world;      // obstacles during pick (no self)
    std::vector<PosedShape> assembly_world;  // obstacles at the assembly target (no self)
};

/// Candidate iteration order: grasp-list order (quality-descending) or a
/// seeded shuffle when the query asks for randomized search.
inline std::vector<int> candidate_order(std::size_t n, const SelectionQuery& q, int which_part) {
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    if (q.shuffle) {
        Rng rng(derive_seed(q.seed, 0x0d, static_cast<std::uint64_t>(which_part)));
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.next_below(i)]);
        }
    }
    return order;
}

/// CD-stage filtering plus per-grasp IK with single-arm collision validation.
/// Pair-level (cross-arm) checks are left to the callers so both selection
/// orders measure candidates identically.
inline std::vector<CandidateEntry> feasible_entries(const SelectionQuery& q, const PartSpec& spec,
                                                    const std::vector<int>& order,
                                                    SelectionReport::PartCounts& counts,
                                                    SelectionReport& report) {
    const Scene& scene = *q.scene;
    const auto& grasps = q.spaces->grasps_for(spec.object_index, spec.arm);
    const SceneObject& object = scene.objects[static_cast<std::size_t>(spec.object_index)];
    const Gripper& gripper = scene.robot.gripper(spec.arm);
    const KinematicChain& chain = scene.robot.chain(spec.arm);
    const JointConfig& home =
        spec.arm == Arm::Right ? scene.robot.home.right : scene.robot.home.left;

    counts.total = static_cast<int>(grasps.size());

    std::vector<int> cd_pick, cd_assembly;
    {
        detail::StageClock clock(report.cd_seconds);
        cd_pick = hand_cd_filter(grasps, gripper.hand_collision_shape, spec.init_pose,
                                 spec.pick_world);
        counts.cd_init = static_cast<int>(cd_pick.size());
        cd_assembly = hand_cd_filter(grasps, gripper.hand_collision_shape,
                                     spec.assembly_object_pose, spec.assembly_world);
        counts.cd_assembly = static_cast<int>(cd_assembly.size());
    }
    const std::vector<int> common = grasp_intersection(cd_pick, cd_assembly);
    counts.intersection = static_cast<int>(common.size());

    std::vector<char> in_common(grasps.size(), 0);
    for (int idx : common) in_common[idx] = 1;

    std::vector<CandidateEntry> entries;
    detail::StageClock clock(report.ik_seconds);
    for (int gi : order) {
        if (!in_common[gi]) continue;
        if (report.ik_attempts >= q.budget) {
            report.budget_exhausted = true;
            break;
        }
        const GraspConfig& grasp = grasps[gi];
        const Attachment payload = object.attachment_for_grasp(grasp.hand_pose_in_object);

        CandidateEntry entry;
        entry.grasp_index = gi;
        entry.hand_pick = spec.init_pose * grasp.hand_pose_in_object;
        entry.hand_assembly = spec.assembly_object_pose * grasp.hand_pose_in_object;

        IkOptions opts;
        opts.seed = derive_seed(q.seed, static_cast<std::uint64_t>(spec.arm),
                                static_cast<std::uint64_t>(gi), 1);
        ++report.ik_attempts;
        auto q_pick = ik(chain, entry.hand_pick, home, opts);
        if (!q_pick || arm_collides(scene.robot, spec.arm, *q_pick, spec.pick_world)) continue;

        const Pose lift(entry.hand_pick.position -
                            entry.hand_pick.apply_direction(Vec3(0, 0, scene.approach_length)),
                        entry.hand_pick.rotation);
        opts.seed = derive_seed(q.seed, static_cast<std::uint64_t>(spec.arm),
                                static_cast<std::uint64_t>(gi), 2);
        ++report.ik_attempts;
        auto q_lift = ik(chain, lift, *q_pick, opts);
        if (!q_lift || arm_collides(scene.robot, spec.arm, *q_lift, spec.pick_world, payload)) {
            continue;
        }

        opts.seed = derive_seed(q.seed, static_cast<std::uint64_t>(spec.arm),
                                static_cast<std::uint64_t>(gi), 3);
        ++report.ik_attempts;
        auto q_assembly = ik(chain, entry.hand_assembly, home, opts);
        if (!q_assembly ||
            arm_collides(scene.robot, spec.arm, *q_assembly, spec.assembly_world, payload)) {
            continue;
        }

        entry.q_pick = std::move(*q_pick);
        entry.q_lift = std::move(*q_lift);
        entry.q_assembly = std::move(*q_assembly);
        entries.push_back(std::move(entry));
        ++counts.ik_feasible;
    }
    return entries;
}

inline PartSpec part1_spec(const SelectionQuery& q) {
    const Scene& scene = *q.scene;
    const TaskPart& part = scene.task.parts[static_cast<std::size_t>(q.part1)];
    const TaskPart& other = scene.task.parts[static_cast<std::size_t>(q.part2)];

    PartSpec spec;
    spec.arm = scene.task.holding_arm;
    spec.object_index = part.object_index;
    spec.init_pose = scene.object_of(part).initial_pose;
    spec.assembly_object_pose = q.assembly * part.mate_pose;

    // world at pick and at the assembly pose: statics plus every other object
    // at its current location (part 2 is still on the table)
    spec.pick_world = scene.static_world;
    spec.assembly_world = scene.static_world;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (static_cast<int>(i) == part.object_index) continue;
        const auto posed = scene.objects[i].posed(scene.objects[i].initial_pose);
        spec.pick_world.insert(spec.pick_world.end(), posed.begin(), posed.end());
        spec.assembly_world.insert(spec.assembly_world.end(), posed.begin(), posed.end());
    }
    (void)other;
    return spec;
}

inline Pose premate_object_pose(const Pose& assembly, const TaskPart& part) {
    return assembly * Pose(part.assembly_dir.normalized() * part.mate_clearance,
                           Rotation::Identity()) *
           part.mate_pose;
}

inline PartSpec part2_spec(const SelectionQuery& q) {
    const Scene& scene = *q.scene;
    const TaskPart& held = scene.task.parts[static_cast<std::size_t>(q.part1)];
    const TaskPart& part = scene.task.parts[static_cast<std::size_t>(q.part2)];

    PartSpec spec;
    spec.arm = scene.task.placing_arm();
    spec.object_index = part.object_index;
    spec.init_pose = scene.object_of(part).initial_pose;
    spec.assembly_object_pose = premate_object_pose(q.assembly, part);

    // part 1 is already held at the assembly pose when part 2 moves
    spec.pick_world = scene.static_world;
    const auto held_posed = scene.object_of(held).posed(q.assembly * held.mate_pose);
    spec.pick_world.insert(spec.pick_world.end(), held_posed.begin(), held_posed.end());
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (static_cast<int>(i) == part.object_index ||
            static_cast<int>(i) == held.object_index) {
            continue;
        }
        const auto posed = scene.objects[i].posed(scene.objects[i].initial_pose);
        spec.pick_world.insert(spec.pick_world.end(), posed.begin(), posed.end());
    }
    spec.assembly_world = spec.pick_world;
    return spec;
}

/// Cross-arm validation of a concrete pair at the assembly pose.
inline bool pair_feasible(const SelectionQuery& q, const CandidateEntry& e1,
                          const CandidateEntry& e2, SelectionReport& report) {
    const Scene& scene = *q.scene;
    const TaskPart& p1 = scene.task.parts[static_cast<std::size_t>(q.part1)];
    const TaskPart& p2 = scene.task.parts[static_cast<std::size_t>(q.part2)];
    const Arm holding = scene.task.holding_arm;

    const auto& grasp1 = q.spaces->grasps_for(p1.object_index, holding)[e1.grasp_index];
    const auto& grasp2 =
        q.spaces->grasps_for(p2.object_index, scene.task.placing_arm())[e2.grasp_index];
    const Attachment att1 = scene.object_of(p1).attachment_for_grasp(grasp1.hand_pose_in_object);
    const Attachment att2 = scene.object_of(p2).attachment_for_grasp(grasp2.hand_pose_in_object);

    std::vector<PosedShape> world = scene.static_world;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (static_cast<int>(i) == p1.object_index || static_cast<int>(i) == p2.object_index) {
            continue;
        }
        const auto posed = scene.objects[i].posed(scene.objects[i].initial_pose);
        world.insert(world.end(), posed.begin(), posed.end());
    }

    DualJointConfig q_both;
    q_both.right = holding == Arm::Right ? e1.q_assembly : e2.q_assembly;
    q_both.left = holding == Arm::Right ? e2.q_assembly : e1.q_assembly;
    const Attachment& right_att = holding == Arm::Right ? att1 : att2;
    const Attachment& left_att = holding == Arm::Right ? att2 : att1;

    detail::StageClock clock(report.pairing_seconds);
    ++report.pairs_checked;
    return !robot_collides(scene.robot, q_both, world, right_att, left_att);
}

}  // namespace detail

/// Depth-first order: walk part-1 candidates, and for each search part 2 with
/// part 1's hand and payload added to the obstacle set; first full pair wins.
inline std::optional<CandidatePair> select_order1(const SelectionQuery& q,
                                                  SelectionReport& report) {
    const Scene& scene = *q.scene;
    const auto spec1 = detail::part1_spec(q);
    const auto order1 =
        detail::candidate_order(q.spaces->grasps_for(spec1.object_index, spec1.arm).size(), q, 1);
    const auto entries1 = detail::feasible_entries(q, spec1, order1, report.part1, report);

    for (const auto& e1 : entries1) {
        if (report.budget_exhausted) break;
        ++report.part1_grasps_examined;

        // part 2 must additionally avoid part 1's chosen hand at the assembly pose
        detail::PartSpec spec2 = detail::part2_spec(q);
        const ConvexShape& hand1 =
            scene.robot.gripper(scene.task.holding_arm).hand_collision_shape;
        spec2.pick_world.push_back({hand1, e1.hand_assembly});
        spec2.assembly_world.push_back({hand1, e1.hand_assembly});

        SelectionReport::PartCounts counts2;
        const auto order2 = detail::candidate_order(
            q.spaces->grasps_for(spec2.object_index, spec2.arm).size(), q, 2);
        const auto entries2 = detail::feasible_entries(q, spec2, order2, counts2, report);
        report.part2 = counts2;  // counts for the last part-1 grasp examined

        for (const auto& e2 : entries2) {
            if (detail::pair_feasible(q, e1, e2, report)) {
                ++report.pairs_found;
                return CandidatePair{e1, e2};
            }
        }
    }
    return std::nullopt;
}

/// Independent-filter order: compute both parts' feasible sets once, then pair
/// them, dropping pairs whose hands or payloads collide mutually. Pairs come
/// back in (part-1 rank, part-2 rank) lexicographic order.
inline std::vector<CandidatePair> select_order2(const SelectionQuery& q,
                                                SelectionReport& report) {
    const auto spec1 = detail::part1_spec(q);
    const auto order1 =
        detail::candidate_order(q.spaces->grasps_for(spec1.object_index, spec1.arm).size(), q, 1);
    const auto entries1 = detail::feasible_entries(q, spec1, order1, report.part1, report);

    const auto spec2 = detail::part2_spec(q);
    const auto order2 =
        detail::candidate_order(q.spaces->grasps_for(spec2.object_index, spec2.arm).size(), q, 2);
    const auto entries2 = detail::feasible_entries(q, spec2, order2, report.part2, report);

    std::vector<CandidatePair> pairs;
    for (const auto& e1 : entries1) {
        for (const auto& e2 : entries2) {
            if (detail::pair_feasible(q, e1, e2, report)) {
                pairs.push_back({e1, e2});
                ++report.pairs_found;
            }
        }
    }
    return pairs;
}

}  // namespace gatamp
