"""Tests for event-log parsing, pass filtering, and receiver inference."""

from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from passmine.ingest import (
    DEFAULT_PASS_TAGS,
    DEFAULT_TEAM_ID,
    EventParseError,
    MatchMeta,
    PassEvent,
    RawEvent,
    display_name,
    filter_team_passes,
    group_halves,
    infer_receivers,
    load_match_meta,
    parse_event_record,
    parse_events,
    parse_events_file,
    read_passes_jsonl,
    sort_chronological,
    split_halves,
    write_passes_jsonl,
)


def make_event(event_id, sec, player, team=676, match=1, period="1H", name="Pass", tags=(1801,)):
    return RawEvent(
        event_id=event_id,
        match_id=match,
        team_id=team,
        player_id=player,
        event_name=name,
        period=period,
        event_sec=sec,
        tags=frozenset(tags),
    )


class TestParseEventRecord:
    def test_sample_record(self, sample_record):
        ev = parse_event_record(sample_record)
        assert ev.event_id == 180864419
        assert ev.match_id == 2565548
        assert ev.team_id == 682
        assert ev.player_id == 3542
        assert ev.event_name == "Pass"
        assert ev.period == "1H"
        assert ev.event_sec == 2.9945919000000004
        assert ev.tags == frozenset({1801})
        assert ev.positions == ((50.0, 50.0), (35.0, 53.0))
        assert ev.event_type_id == 8
        assert ev.sub_event_name == "Simple pass"
        assert ev.sub_event_id == 85

    def test_round_trip_through_record(self, sample_record):
        ev = parse_event_record(sample_record)
        assert parse_event_record(ev.to_record()) == ev

    def test_optional_fields_default(self):
        ev = parse_event_record(
            {
                "id": 1,
                "matchId": 2,
                "teamId": 3,
                "playerId": 4,
                "eventName": "Duel",
                "matchPeriod": "2H",
                "eventSec": 1.5,
            }
        )
        assert ev.tags == frozenset()
        assert ev.positions == ()
        assert ev.event_type_id is None
        assert ev.sub_event_name is None
        assert ev.sub_event_id is None

    def test_empty_sub_event_fields_treated_as_absent(self, sample_record):
        sample_record["subEventName"] = ""
        sample_record["subEventId"] = ""
        ev = parse_event_record(sample_record)
        assert ev.sub_event_name is None
        assert ev.sub_event_id is None

    @pytest.mark.parametrize("field", ["id", "matchId", "teamId", "playerId", "eventName", "matchPeriod", "eventSec"])
    def test_missing_required_field(self, sample_record, field):
        del sample_record[field]
        with pytest.raises(EventParseError, match=field):
            parse_event_record(sample_record)

    def test_non_dict_rejected(self):
        with pytest.raises(EventParseError):
            parse_event_record([1, 2, 3])

    def test_bad_tags_shape(self, sample_record):
        sample_record["tags"] = [{"name": "accurate"}]
        with pytest.raises(EventParseError):
            parse_event_record(sample_record)

    def test_tags_not_a_list(self, sample_record):
        sample_record["tags"] = {"id": 1801}
        with pytest.raises(EventParseError, match="tags"):
            parse_event_record(sample_record)

    def test_non_numeric_event_sec(self, sample_record):
        sample_record["eventSec"] = "soon"
        with pytest.raises(EventParseError):
            parse_event_record(sample_record)


class TestParseEvents:
    def test_parses_array(self, sample_record):
        result = parse_events(json.dumps([sample_record]))
        assert len(result.events) == 1
        assert result.skipped == ()

    def test_skips_malformed_by_default(self, sample_record):
        bad = dict(sample_record)
        del bad["playerId"]
        bad["id"] = 99
        result = parse_events(json.dumps([sample_record, bad, sample_record]))
        assert len(result.events) == 2
        assert len(result.skipped) == 1
        assert result.skipped[0].index == 1
        assert result.skipped[0].event_id == 99
        assert "playerId" in result.skipped[0].reason

    def test_strict_mode_raises_with_index(self, sample_record):
        bad = dict(sample_record)
        del bad["teamId"]
        with pytest.raises(EventParseError, match="record 1"):
            parse_events(json.dumps([sample_record, bad]), strict=True)

    def test_invalid_json_reports_byte_offset(self):
        with pytest.raises(EventParseError, match="byte 4"):
            parse_events('[1, !]')

    def test_byte_offset_counts_utf8_bytes(self):
        # The two-byte character shifts the offset: char 7 but byte 8.
        with pytest.raises(EventParseError, match="byte 8"):
            parse_events('["éx", !]')

    def test_non_array_rejected_even_lenient(self):
        with pytest.raises(EventParseError, match="array"):
            parse_events('{"id": 1}')

    def test_file_round_trip(self, tmp_path, sample_record):
        p = tmp_path / "events.json"
        p.write_text(json.dumps([sample_record]), encoding="utf-8")
        assert len(parse_events_file(p).events) == 1

    def test_fixture_file_parses(self, events_path):
        result = parse_events_file(events_path)
        assert len(result.events) == 44
        assert [(s.index, s.event_id) for s in result.skipped] == [(18, 190)]

    def test_fixture_file_strict_raises(self, events_path):
        with pytest.raises(EventParseError):
            parse_events_file(events_path, strict=True)


class TestSortChronological:
    def test_orders_by_match_period_time_id(self):
        events = [
            make_event(4, 1.0, 1, match=2, period="1H"),
            make_event(3, 9.0, 1, match=1, period="2H"),
            make_event(2, 5.0, 1, match=1, period="1H"),
            make_event(1, 5.0, 1, match=1, period="1H"),
        ]
        assert [e.event_id for e in sort_chronological(events)] == [1, 2, 3, 4]

    def test_periods_rank_in_play_order_not_alphabetical(self):
        events = [
            make_event(1, 0.0, 1, period="P"),
            make_event(2, 0.0, 1, period="E1"),
            make_event(3, 0.0, 1, period="2H"),
            make_event(4, 0.0, 1, period="1H"),
        ]
        assert [e.period for e in sort_chronological(events)] == ["1H", "2H", "E1", "P"]


class TestFilterTeamPasses:
    def test_defaults(self):
        assert DEFAULT_TEAM_ID == 676
        assert DEFAULT_PASS_TAGS == frozenset({1801, 1802, 301, 302})

    def test_keeps_only_tagged_team_passes(self):
        events = [
            make_event(1, 1.0, 10),                            # kept
            make_event(2, 2.0, 50, team=900),                  # other team
            make_event(3, 3.0, 10, name="Duel"),               # not a pass
            make_event(4, 4.0, 10, tags=(701,)),               # no qualifying tag
            make_event(5, 5.0, 11, tags=(701, 302)),           # kept, mixed tags
        ]
        kept = filter_team_passes(events)
        assert [e.event_id for e in kept] == [1, 5]

    def test_each_tag_qualifies_alone(self):
        for tag in (1801, 1802, 301, 302):
            events = [make_event(1, 1.0, 10, tags=(tag,))]
            assert filter_team_passes(events) == events

    def test_custom_team_and_tags(self):
        events = [make_event(1, 1.0, 50, team=900, tags=(1802,))]
        assert filter_team_passes(events, team_id=900, pass_tags=frozenset({1802})) == events
        assert filter_team_passes(events, team_id=900, pass_tags=frozenset({301})) == []

    def test_preserves_input_order(self):
        events = [make_event(2, 9.0, 10), make_event(1, 1.0, 10)]
        assert [e.event_id for e in filter_team_passes(events)] == [2, 1]

    def test_idempotent(self):
        events = [make_event(1, 1.0, 10), make_event(2, 2.0, 50, team=900)]
        once = filter_team_passes(events)
        assert filter_team_passes(once) == once


class TestInferReceivers:
    def test_resolves_next_teammate(self):
        events = [
            make_event(1, 1.0, 10),
            make_event(2, 2.0, 11, name="Touch", tags=()),
        ]
        result = infer_receivers(events, filter_team_passes(events))
        assert len(result.resolved) == 1
        assert result.resolved[0].receiver_id == 11
        assert result.resolved[0].passer_id == 10
        assert result.dropped == ()

    def test_two_event_stream_yields_one_pass(self):
        # Minimal stream: a tagged pass followed by any teammate action.
        events = [
            make_event(100, 2.9, 3542, team=682, match=2565548),
            make_event(101, 4.1, 3543, team=682, match=2565548, name="Duel", tags=()),
        ]
        result = infer_receivers(events, filter_team_passes(events, team_id=682))
        assert [p.to_record() for p in result.resolved] == [
            {
                "event_id": 100,
                "match_id": 2565548,
                "period": "1H",
                "event_sec": 2.9,
                "passer_id": 3542,
                "receiver_id": 3543,
                "tags": [1801],
            }
        ]

    def test_opponent_next_dropped(self):
        events = [
            make_event(1, 1.0, 10),
            make_event(2, 2.0, 50, team=900, name="Duel", tags=()),
        ]
        result = infer_receivers(events, filter_team_passes(events))
        assert result.resolved == ()
        assert [(d.event.event_id, d.reason) for d in result.dropped] == [(1, "opponent_next")]

    def test_same_player_next_dropped(self):
        events = [
            make_event(1, 1.0, 10),
            make_event(2, 2.0, 10, name="Shot", tags=()),
        ]
        result = infer_receivers(events, filter_team_passes(events))
        assert [(d.event.event_id, d.reason) for d in result.dropped] == [(1, "same_player_next")]

    def test_end_of_period_dropped(self):
        events = [
            make_event(1, 2000.0, 10, period="1H"),
            make_event(2, 1.0, 11, period="2H", name="Pass", tags=(1801,)),
        ]
        result = infer_receivers(events, [events[0]])
        assert [(d.event.event_id, d.reason) for d in result.dropped] == [(1, "end_of_period")]

    def test_end_of_match_dropped(self):
        events = [make_event(1, 1.0, 10)]
        result = infer_receivers(events, events)
        assert [d.reason for d in result.dropped] == ["end_of_period"]

    def test_next_event_found_by_time_not_input_order(self):
        # The follower arrives earlier in the array than the pass.
        events = [
            make_event(2, 5.0, 11, name="Touch", tags=()),
            make_event(1, 1.0, 10),
        ]
        result = infer_receivers(events, filter_team_passes(events))
        assert result.resolved[0].receiver_id == 11

    def test_unfiltered_next_event_still_resolves(self):
        # A non-qualifying pass right after still names the receiver.
        events = [
            make_event(1, 1.0, 12),
            make_event(2, 2.0, 13, tags=(701,)),
        ]
        result = infer_receivers(events, filter_team_passes(events))
        assert result.resolved[0].receiver_id == 13

    def test_pass_tags_narrowed_on_output(self):
        events = [
            make_event(1, 1.0, 10, tags=(701, 1801, 302)),
            make_event(2, 2.0, 11, name="Touch", tags=()),
        ]
        result = infer_receivers(events, filter_team_passes(events))
        assert result.resolved[0].tags == frozenset({1801, 302})

    def test_every_pass_is_resolved_or_dropped(self, fixture_events):
        passes = filter_team_passes(fixture_events)
        result = infer_receivers(fixture_events, passes)
        assert len(result.resolved) + len(result.dropped) == len(passes)
        assert {p.event_id for p in result.resolved} | {
            d.event.event_id for d in result.dropped
        } == {e.event_id for e in passes}

    def test_fixture_counts_and_drop_reasons(self, fixture_events):
        result = infer_receivers(fixture_events, filter_team_passes(fixture_events))
        assert len(result.resolved) == 21
        assert [(d.event.event_id, d.reason) for d in result.dropped] == [
            (107, "opponent_next"),
            (109, "same_player_next"),
            (119, "end_of_period"),
        ]


class TestSplitHalves:
    def test_partitions_one_match(self):
        passes = [
            PassEvent(2, 1, "2H", 5.0, 10, 11),
            PassEvent(1, 1, "1H", 9.0, 10, 11),
            PassEvent(3, 1, "2H", 1.0, 11, 10),
        ]
        halves = split_halves(passes)
        assert list(halves) == ["1H", "2H"]
        assert [p.event_id for p in halves["2H"]] == [3, 2]

    def test_extra_time_keys(self):
        passes = [
            PassEvent(1, 1, "E1", 1.0, 10, 11),
            PassEvent(2, 1, "1H", 1.0, 10, 11),
        ]
        assert list(split_halves(passes)) == ["1H", "E1"]

    def test_multiple_matches_rejected(self):
        passes = [
            PassEvent(1, 1, "1H", 1.0, 10, 11),
            PassEvent(2, 2, "1H", 1.0, 10, 11),
        ]
        with pytest.raises(ValueError, match="several matches"):
            split_halves(passes)

    def test_empty(self):
        assert split_halves([]) == {}


class TestGroupHalves:
    def test_groups_across_matches(self):
        passes = [
            PassEvent(4, 2, "1H", 1.0, 10, 11),
            PassEvent(1, 1, "1H", 2.0, 10, 11),
            PassEvent(2, 1, "1H", 1.0, 11, 10),
            PassEvent(3, 1, "2H", 1.0, 10, 11),
        ]
        groups = group_halves(passes)
        assert list(groups) == [(1, "1H"), (1, "2H"), (2, "1H")]
        assert [p.event_id for p in groups[(1, "1H")]] == [2, 1]

    def test_empty(self):
        assert group_halves([]) == {}


class TestPassesJsonl:
    def test_round_trip(self, tmp_path):
        passes = [
            PassEvent(1, 8001, "1H", 10.0, 10, 11, frozenset({1801})),
            PassEvent(2, 8001, "1H", 20.5, 11, None, frozenset()),
        ]
        path = tmp_path / "passes.jsonl"
        write_passes_jsonl(passes, path)
        assert read_passes_jsonl(path) == passes

    def test_golden_bytes(self, tmp_path):
        path = tmp_path / "passes.jsonl"
        write_passes_jsonl([PassEvent(1, 8001, "1H", 10.0, 10, 11, frozenset({1801}))], path)
        assert path.read_text(encoding="utf-8") == (
            '{"event_id": 1, "match_id": 8001, "period": "1H", "event_sec": 10.0, '
            '"passer_id": 10, "receiver_id": 11, "tags": [1801]}\n'
        )

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "passes.jsonl"
        path.write_text(
            '{"event_id": 1, "match_id": 1, "period": "1H", "event_sec": 0.5, "passer_id": 7}\n\n',
            encoding="utf-8",
        )
        passes = read_passes_jsonl(path)
        assert len(passes) == 1
        assert passes[0].receiver_id is None
        assert passes[0].tags == frozenset()

    def test_malformed_line_reports_position(self, tmp_path):
        path = tmp_path / "passes.jsonl"
        path.write_text('{"event_id": 1}\n', encoding="utf-8")
        with pytest.raises(EventParseError, match="line 1"):
            read_passes_jsonl(path)

    @given(
        st.lists(
            st.builds(
                PassEvent,
                st.integers(min_value=1, max_value=10**9),
                st.integers(min_value=1, max_value=10**7),
                st.sampled_from(["1H", "2H", "E1"]),
                st.floats(min_value=0.0, max_value=4000.0, allow_nan=False),
                st.integers(min_value=1, max_value=10**6),
                st.one_of(st.none(), st.integers(min_value=1, max_value=10**6)),
                st.frozensets(st.sampled_from([1801, 1802, 301, 302]), max_size=4),
            ),
            max_size=10,
        )
    )
    def test_record_round_trip_property(self, passes):
        for p in passes:
            assert PassEvent.from_record(json.loads(json.dumps(p.to_record()))) == p


class TestMatchMeta:
    def test_fixture_matches(self, matches_path, players_path):
        meta, names = load_match_meta(matches_path, players_path)
        assert meta[8001] == MatchMeta(
            match_id=8001,
            label="Alpha FC - Beta United, 2 - 1",
            date="2026-01-10",
            team_ids=frozenset({676, 900}),
        )
        assert meta[8002].date == "2026-01-17"
        assert meta[8002].team_ids == frozenset({676, 901})
        assert names[10] == "A. Keeper"
        assert names[50] == "X. Stone"

    def test_players_optional(self, matches_path):
        meta, names = load_match_meta(matches_path)
        assert set(meta) == {8001, 8002}
        assert names == {}

    def test_display_name_falls_back_to_id(self, matches_path, players_path):
        _, names = load_match_meta(matches_path, players_path)
        assert display_name(10, names) == "A. Keeper"
        assert display_name(13, names) == "13"

    def test_malformed_matches_file(self, tmp_path):
        p = tmp_path / "matches.json"
        p.write_text('{"wyId": 1}', encoding="utf-8")
        with pytest.raises(EventParseError, match="array"):
            load_match_meta(p)
