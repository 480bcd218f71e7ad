#pragma once

#include "voicekit/error.hpp"

#include "voicekit/codec/decoder.hpp"
#include "voicekit/codec/encoder.hpp"
#include "voicekit/codec/goertzel.hpp"
#include "voicekit/codec/pgm.hpp"
#include "voicekit/codec/scheme.hpp"

#include "voicekit/dsp/features.hpp"
#include "voicekit/dsp/wav.hpp"

#include "voicekit/stimuli/corpus.hpp"

#include "voicekit/assess/compare.hpp"
#include "voicekit/assess/evaluate.hpp"
#include "voicekit/assess/report_io.hpp"

#include "voicekit/session/store.hpp"

#include "voicekit/service/commands.hpp"
#include "voicekit/service/http.hpp"
