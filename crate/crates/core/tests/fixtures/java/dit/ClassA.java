package test.dit;

public class ClassA {
}
