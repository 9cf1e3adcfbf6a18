#pragma once

#include <array>
#include <string>
#include <vector>

#include "gatamp/aspace.hpp"
#include "gatamp/convex.hpp"
#include "gatamp/grasp.hpp"
#include "gatamp/kin.hpp"
#include "gatamp/mesh.hpp"

namespace gatamp {

/// A manipulable part: full mesh for grasp synthesis, convex pieces for
/// collision (a single hull unless the scene supplies a decomposition).
struct SceneObject {
    std::string id;
    TriMesh mesh;
    Pose initial_pose;
    std::vector<ConvexShape> collision;

    std::vector<PosedShape> posed(const Pose& pose) const {
        std::vector<PosedShape> out;
        out.reserve(collision.size());
        for (const auto& piece : collision) out.push_back({piece, pose});
        return out;
    }

    /// Payload pieces relative to the tool frame for a given grasp.
    Attachment attachment_for_grasp(const Pose& hand_pose_in_object) const {
        Attachment att;
        const Pose object_in_hand = hand_pose_in_object.inverse();
        for (const auto& piece : collision) att.pieces.push_back({piece, object_in_hand});
        return att;
    }
};

/// One step of the fixed assembly order.
struct TaskPart {
    std::string object_id;
    int object_index = -1;
    Pose mate_pose;                // part frame in the assembly frame
    Vec3 assembly_dir{0, 0, 1};   // v_a in the assembly frame, unit
    double threshold_deg = 0.0;
    double mate_clearance = 0.03;  // pre-mate standoff along v_a, m
};

struct AssemblyTask {
    std::vector<TaskPart> parts;   // assembly order; part 0 is held first
    Arm holding_arm = Arm::Right;

    Arm placing_arm() const { return holding_arm == Arm::Right ? Arm::Left : Arm::Right; }
};

struct Scene {
    DualArmRobot robot;
    std::vector<PosedShape> static_world;  // table, fixtures, obstacles
    std::vector<SceneObject> objects;
    AssemblyTask task;
    AssemblyRegion region;
    GraspSynthesisParams grasp_params;
    double approach_length = 0.08;  // straight approach/retract length along hand z, m

    const SceneObject& object_of(const TaskPart& part) const {
        return objects[static_cast<std::size_t>(part.object_index)];
    }
};

/// The discretized G-A spaces: per-object grasp lists (one per arm) and the
/// gravity-prefiltered assembly pose grid.
struct GaSpaces {
    std::vector<std::array<std::vector<GraspConfig>, 2>> grasps;  // [object][arm]
    std::vector<AssemblyPose> all_poses;                          // raw position x orientation grid
    std::vector<AssemblyPose> poses;                              // filtered for the first mate

    const std::vector<GraspConfig>& grasps_for(int object_index, Arm arm) const {
        return grasps[static_cast<std::size_t>(object_index)][arm == Arm::Right ? 0 : 1];
    }
};

inline Pose assembly_world_pose(const AssemblyPose& ap) { return Pose(ap.position, ap.rotation); }

}  // namespace gatamp
