package test.suite;

public class DITCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
