#pragma once

#include <map>
#include <string>
#include <vector>

#include "gatamp/planner.hpp"

namespace gatamp {

struct ValidationResult {
    bool ok = true;
    std::string message;

    static ValidationResult fail(std::string why) { return {false, std::move(why)}; }
};

/// Replays a segment chain through an attachment simulator and re-checks
/// every motion segment with node-level validity at the given per-joint
/// resolution. On success outcomes it also verifies that the final relative
/// mate poses match the task within 1e-6.
inline ValidationResult validate_plan(const Scene& scene, const std::vector<Segment>& segments,
                                      double resolution, bool expect_complete_assembly) {
    const DualArmRobot& robot = scene.robot;
    const Arm holding = scene.task.holding_arm;

    DualJointConfig current = robot.home;
    std::vector<char> on_table(scene.objects.size(), 1);
    std::map<std::string, int> object_index;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        object_index[scene.objects[i].id] = static_cast<int>(i);
    }
    std::map<std::string, std::pair<Arm, Pose>> held;  // object id -> (arm, pose in hand)
    StabilityModel stability;
    Pose finished_in_hand;
    bool have_finished_frame = false;

    auto attachments_of = [&](Arm arm) {
        Attachment att;
        for (const auto& [id, where] : held) {
            if (where.first != arm) continue;
            const auto& object = scene.objects[static_cast<std::size_t>(object_index.at(id))];
            for (const auto& piece : object.collision) {
                att.pieces.push_back({piece, where.second});
            }
        }
        return att;
    };

    auto config_equal = [](const DualJointConfig& a, const DualJointConfig& b, double tol) {
        for (std::size_t i = 0; i < a.right.size(); ++i) {
            if (std::abs(a.right[i] - b.right[i]) > tol) return false;
        }
        for (std::size_t i = 0; i < a.left.size(); ++i) {
            if (std::abs(a.left[i] - b.left[i]) > tol) return false;
        }
        return true;
    };

    int seg_no = -1;
    for (const Segment& seg : segments) {
        ++seg_no;
        const std::string where = "segment " + std::to_string(seg_no) + " (" +
                                  std::string(to_string(seg.kind)) + ", " + to_string(seg.arm) +
                                  ")";
        switch (seg.kind) {
            case SegmentKind::Grip: {
                const auto it = object_index.find(seg.object_id);
                if (it == object_index.end()) {
                    return ValidationResult::fail(where + ": unknown object " + seg.object_id);
                }
                if (!on_table[static_cast<std::size_t>(it->second)]) {
                    return ValidationResult::fail(where + ": object not on the table");
                }
                // the gripped object must actually be at its initial pose
                const Pose hand = fk(robot.chain(seg.arm),
                                     seg.arm == Arm::Right ? current.right : current.left);
                const Pose object_pose = hand * seg.pose_in_hand;
                const auto& object = scene.objects[static_cast<std::size_t>(it->second)];
                if ((object_pose.position - object.initial_pose.position).norm() > 5e-3) {
                    return ValidationResult::fail(where + ": grip far from the object");
                }
                on_table[static_cast<std::size_t>(it->second)] = 0;
                held[seg.object_id] = {seg.arm, seg.pose_in_hand};
                if (seg.arm == holding && !have_finished_frame &&
                    seg.object_id == scene.task.parts[0].object_id) {
                    finished_in_hand = seg.pose_in_hand * scene.task.parts[0].mate_pose.inverse();
                    have_finished_frame = true;
                }
                break;
            }
            case SegmentKind::Release: {
                const auto it = held.find(seg.object_id);
                if (it == held.end() || it->second.first != seg.arm) {
                    return ValidationResult::fail(where + ": object is not held by this arm");
                }
                held.erase(it);
                held[seg.object_id] = {holding, seg.pose_in_hand};
                for (const auto& part : scene.task.parts) {
                    if (part.object_id == seg.object_id) {
                        stability.add(part.assembly_dir, part.threshold_deg);
                    }
                }
                break;
            }
            default: {  // motion segments
                if (seg.waypoints.empty()) {
                    return ValidationResult::fail(where + ": motion segment without waypoints");
                }
                if (!config_equal(seg.waypoints.front(), current, 1e-9)) {
                    return ValidationResult::fail(where + ": does not start at the current config");
                }
                // only the segment's arm may move
                for (const auto& wp : seg.waypoints) {
                    const JointConfig& frozen =
                        seg.arm == Arm::Right ? wp.left : wp.right;
                    const JointConfig& expect =
                        seg.arm == Arm::Right ? current.left : current.right;
                    for (std::size_t i = 0; i < frozen.size(); ++i) {
                        if (std::abs(frozen[i] - expect[i]) > 1e-9) {
                            return ValidationResult::fail(where + ": moves the frozen arm");
                        }
                    }
                }

                PlanContext ctx;
                ctx.robot = &robot;
                ctx.world = detail::tabled_world(scene, on_table);
                ctx.right_attachment = attachments_of(Arm::Right);
                ctx.left_attachment = attachments_of(Arm::Left);
                if (!stability.empty() && have_finished_frame) {
                    ctx.stability = stability;
                    ctx.holding_arm = holding;
                    ctx.finished_in_hand = finished_in_hand;
                }
                MotionPath path;
                path.waypoints = seg.waypoints;
                if (!path_validate(path, ctx, resolution)) {
                    return ValidationResult::fail(where + ": fails validity re-check");
                }
                current = seg.waypoints.back();
            }
        }
    }

    if (expect_complete_assembly) {
        if (!have_finished_frame) {
            return ValidationResult::fail("no grip of the first part was recorded");
        }
        for (std::size_t k = 0; k < scene.task.parts.size(); ++k) {
            const TaskPart& part = scene.task.parts[k];
            const auto it = held.find(part.object_id);
            if (it == held.end() || it->second.first != holding) {
                return ValidationResult::fail("part '" + part.object_id +
                                              "' did not end in the holding hand");
            }
            // relative mate pose vs the task specification
            const Pose expected = finished_in_hand * part.mate_pose;
            const Pose actual = it->second.second;
            if ((expected.position - actual.position).norm() > 1e-6) {
                return ValidationResult::fail("part '" + part.object_id +
                                              "' is mated off-position");
            }
            const double rot_err =
                rotation_error(expected.rotation, actual.rotation).norm();
            if (rot_err > 1e-6) {
                return ValidationResult::fail("part '" + part.object_id +
                                              "' is mated off-orientation");
            }
        }
    }
    return {};
}

}  // namespace gatamp
