import json

import numpy as np
import pytest

from qmeta.datagen import GenConfig, draw_code
from qmeta.dsl import print_code
from qmeta.states import parse_state
from qmeta.targets import fixture_lines
from qmeta.vocab import (
    CIRCUIT_SOURCE_VOCAB, CIRCUIT_TARGET_VOCAB, EOS, MAIN_VOCAB, MAX_LEN,
    PAD, SOS, LengthError, TokenizeError, UnencodableStateError, decode,
    decode_states, encode_code, encode_state_body, encode_states,
    states_text, vocab_hashes, vocabulary,
)


class TestVocabularyTables:
    def test_main_pinned_ids(self):
        assert MAIN_VOCAB["<PAD>"] == 0
        assert MAIN_VOCAB["<SOS>"] == 1
        assert MAIN_VOCAB["<EOS>"] == 2
        assert MAIN_VOCAB["0"] == 3
        assert MAIN_VOCAB["9"] == 12
        assert MAIN_VOCAB["ax"] == 13
        assert MAIN_VOCAB["hx"] == 20
        assert MAIN_VOCAB["ay"] == 21
        assert MAIN_VOCAB["hy"] == 28
        assert MAIN_VOCAB["az"] == 29
        assert MAIN_VOCAB["hz"] == 36
        assert MAIN_VOCAB["["] == 37
        assert MAIN_VOCAB["]"] == 38
        assert MAIN_VOCAB["|"] == 39
        assert MAIN_VOCAB["+"] == 40
        assert MAIN_VOCAB["-"] == 41
        assert MAIN_VOCAB["*"] == 42
        assert MAIN_VOCAB["for ii in range(N):"] == 43
        assert MAIN_VOCAB["\n"] == 44
        assert MAIN_VOCAB["    "] == 45
        assert MAIN_VOCAB["e("] == 46
        assert MAIN_VOCAB[")"] == 47
        assert MAIN_VOCAB[","] == 48
        assert MAIN_VOCAB["N"] == 49
        assert MAIN_VOCAB["ii"] == 50
        assert len(MAIN_VOCAB) == 51
        assert sorted(MAIN_VOCAB.values()) == list(range(51))

    def test_circuit_source_pinned_ids(self):
        v = CIRCUIT_SOURCE_VOCAB
        assert (v["X"], v["Y"], v["|"], v[">"]) == (13, 14, 15, 16)
        assert (v["+"], v["-"], v["sqrt("], v["/"], v["*"]) == (17, 18, 19, 20, 21)
        assert (v["("], v[")"], v["<SEP>"]) == (22, 23, 24)
        assert len(v) == 25
        assert sorted(v.values()) == list(range(25))

    def test_circuit_target_pinned_ids(self):
        v = CIRCUIT_TARGET_VOCAB
        assert v["for ii in range("] == 13
        assert v["):"] == 14
        assert (v["\n"], v["    "]) == (15, 16)
        assert (v["qH"], v["qCNOT"], v["qX"], v["qZ"]) == (17, 18, 19, 20)
        assert (v["+"], v["-"], v["*"]) == (21, 22, 23)
        assert (v["NN"], v["ii"], v["("], v[")"], v[","]) == (24, 25, 26, 27, 28)
        assert (v["qToffoli"], v["qCSWAP"], v["qCZ"]) == (29, 30, 31)
        assert len(v) == 32
        assert sorted(v.values()) == list(range(32))

    def test_serialized_hashes_stable(self):
        hashes = vocab_hashes()
        assert hashes == {
            "main": "672043e2d172120e3777f33005ce06c3bdb08a2d778e1aa16d6cc2bf42e0fff4",
            "circuit_source": "2a749269cccdf2cdcf83ae05e5178bbd3c8b1ff99c579a24cb8f8e83668fb15d",
            "circuit_target": "788db6194117d217c40010e272969ba605dcee2c3ed5c6baa761798ec9bf6718",
        }

    def test_json_form_injective(self):
        for task, side in [("optics", "code"), ("circuit", "states"), ("circuit", "code")]:
            v = vocabulary(task, side)
            mapping = json.loads(v.to_json())
            assert len(set(mapping.values())) == len(mapping)

    def test_shipped_files_match_tables(self):
        from importlib import resources
        for fname, table in [("main.json", MAIN_VOCAB),
                             ("circuit_source.json", CIRCUIT_SOURCE_VOCAB),
                             ("circuit_target.json", CIRCUIT_TARGET_VOCAB)]:
            text = resources.files("qmeta").joinpath(f"data/vocab/{fname}").read_text()
            assert json.loads(text) == table


class TestStateEncoding:
    def test_plus_one_xx_fragment(self):
        state = parse_state("+1[xx]")
        assert encode_state_body(state, "optics") == [40, 4, 37, 13, 14, 38]

    def test_ghz_triple_round_trip(self):
        lines = fixture_lines("ghz", "optics")
        states = [parse_state(s) for s in lines]
        ids = encode_states(states, "optics")
        assert ids[0] == SOS and ids[-1] == EOS
        assert decode_states(ids, "optics") == lines
        assert decode(ids, "optics", "states") == "|".join(lines)

    def test_circuit_triple_round_trip(self):
        lines = fixture_lines("majumdar_ghosh", "circuit")
        states = [parse_state(s, "circuit") for s in lines]
        ids = encode_states(states, "circuit")
        assert decode_states(ids, "circuit") == lines

    def test_graph_star_size6_fits_1792(self):
        lines = fixture_lines("star", "graph")
        states = [parse_state(s, "circuit") for s in lines]
        ids = encode_states(states, "graph")
        assert len(ids) <= 1792
        assert len(ids) > 640  # too long for the circuit-task cap
        assert decode_states(ids, "graph") == lines

    def test_ten_particle_state_unencodable(self):
        state = parse_state("+1[xxxxxxxxxx]")
        with pytest.raises(UnencodableStateError):
            encode_state_body(state, "optics")

    def test_all_fixture_states_round_trip(self):
        from qmeta.targets import list_targets
        for task in ("optics", "circuit", "graph"):
            style = "optics" if task == "optics" else "circuit"
            for tc in list_targets(task):
                lines = fixture_lines(tc.slug, task)
                states = [parse_state(s, style) for s in lines]
                ids = encode_states(states, task)
                assert decode_states(ids, task) == lines
                assert decode(ids, task, "states") == states_text(states, task)


class TestCodeEncoding:
    def test_size_variable_ids(self):
        assert vocabulary("optics", "code").token_to_id["N"] == 49
        assert vocabulary("circuit", "code").token_to_id["NN"] == 24

    def test_loop_header_single_token(self):
        ids = encode_code("for ii in range(N):\n    e(0,1,0,0)\n", "optics")
        # frame, loop token, newline, indent, call...
        assert ids[1] == 43

    def test_decode_reproduces_text(self):
        text = "qH(0)\nfor ii in range(2*NN+1):\n    qCNOT(ii,1+ii)\nqX(0)\n"
        ids = encode_code(text, "circuit")
        assert decode(ids, "circuit", "code") == text

    def test_unknown_id_rejected(self):
        with pytest.raises(TokenizeError):
            decode([SOS, 999, EOS], "optics", "code")

    def test_pad_stripped(self):
        text = "e(0,1,0,0)\nfor ii in range(N):\n    e(ii,1+ii,0,0)\n"
        ids = encode_code(text, "optics") + [PAD, PAD]
        assert decode(ids, "optics", "code") == text

    def test_untokenizable_text(self):
        with pytest.raises(TokenizeError):
            encode_code("q?(0)\n", "circuit")

    def test_length_cap_enforced(self):
        long_code = "e(0,1,0,0)\n" * 70 + "for ii in range(N):\n    e(0,1,0,0)\n"
        with pytest.raises(LengthError):
            encode_code(long_code, "optics")

    @pytest.mark.parametrize("task", ["optics", "circuit", "graph"])
    def test_random_code_round_trips(self, task):
        cfg = (GenConfig("optics", "long", 1, 3, True, "long")
               if task == "optics" else GenConfig(task=task))
        rng = np.random.default_rng(11)
        done = 0
        while done < 300:
            code = draw_code(cfg, rng)
            if code is None:
                continue
            text = print_code(code)
            assert decode(encode_code(text, task), task, "code") == text
            done += 1


class TestLimits:
    def test_max_len_table(self):
        assert MAX_LEN == {"optics": (640, 640), "circuit": (640, 640),
                           "graph": (1792, 640)}
