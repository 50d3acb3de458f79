#pragma once

// Umbrella header for the eyecontact library.

#include "eyecontact/camera.hpp"
#include "eyecontact/dbscan.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/evaluation.hpp"
#include "eyecontact/face_model.hpp"
#include "eyecontact/frame.hpp"
#include "eyecontact/gaze.hpp"
#include "eyecontact/io.hpp"
#include "eyecontact/landmarks.hpp"
#include "eyecontact/metrics.hpp"
#include "eyecontact/normalization.hpp"
#include "eyecontact/pipeline.hpp"
#include "eyecontact/pnp.hpp"
#include "eyecontact/pose.hpp"
#include "eyecontact/rng.hpp"
#include "eyecontact/svm.hpp"
#include "eyecontact/synthgen.hpp"
